#include "rispoof/channel.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rispoof {

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

void SceneConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (!(carrier_hz > 0.0) || !std::isfinite(carrier_hz)) fail("carrier frequency must be > 0");
  if (bs_antennas < 2) fail("radar needs at least 2 antennas");
  if (ris_elements < 1) fail("RIS needs at least 1 element");
  if (pilots < 1) fail("pilot count must be >= 1");
  if (!(tx_power_w > 0.0) || !std::isfinite(tx_power_w)) fail("transmit power must be > 0");
  if (!(noise_power_w > 0.0) || !std::isfinite(noise_power_w)) fail("noise power must be > 0");
  if (!ris_position.allFinite()) fail("RIS position must be finite");
  if (ris_position.isZero(0.0)) fail("RIS position must not be the origin");
  if (window_count < 1) fail("nulling window needs at least one angle");
  if (window_half_width.radians() < 0.0) fail("window half-width must be >= 0");
}

NullingWindow SceneConfig::window() const {
  return NullingWindow::uniform(theta_true(), window_half_width, window_count);
}

MonostaticKernel SceneConfig::kernel() const {
  if (convention == KernelConvention::SpecularPlusPi) return MonostaticKernel::specular();
  return MonostaticKernel::fixed_incidence(theta_true());
}

double attenuation(const Eigen::Vector2d& ris_position, double carrier_hz) {
  const double range = ris_position.norm();
  if (range == 0.0) throw std::invalid_argument("attenuation undefined at the origin");
  if (!(carrier_hz > 0.0)) throw std::invalid_argument("carrier frequency must be > 0");
  const double ratio = (kSpeedOfLight / carrier_hz) / (4.0 * std::numbers::pi * range);
  return ratio * ratio;
}

CVector mrt_precoder(Angle theta, int antennas) {
  return steering(antennas, theta) / std::sqrt(static_cast<double>(antennas));
}

CascadedChannel cascaded_channel(const SceneConfig& config, const RisProfile& profile) {
  if (profile.size() != config.ris_elements) {
    std::ostringstream msg;
    msg << "profile has " << profile.size() << " elements, scene expects "
        << config.ris_elements;
    throw std::invalid_argument(msg.str());
  }
  const Angle theta = config.theta_true();
  const double a_ris = attenuation(config.ris_position, config.carrier_hz);
  const Complex gain = config.kernel()(theta, profile);
  const CVector a_n = steering(config.bs_antennas, theta);
  CascadedChannel ch;
  ch.h = (a_ris * gain) * (a_n * a_n.adjoint());
  ch.a_ris = a_ris;
  ch.theta_true = theta;
  ch.kernel_gain = gain;
  return ch;
}

CVector constant_pilots(int count) {
  if (count < 1) throw std::invalid_argument("pilot count must be >= 1");
  return CVector::Ones(count);
}

NoiseStream::NoiseStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

Complex NoiseStream::draw(double variance) {
  const double s = std::sqrt(variance / 2.0);
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {s * re, s * im};
}

namespace {

void check_pilots(const CVector& pilots, int expected) {
  if (pilots.size() != expected) {
    std::ostringstream msg;
    msg << "expected " << expected << " pilots, got " << pilots.size();
    throw std::invalid_argument(msg.str());
  }
  const double power = pilots.squaredNorm() / static_cast<double>(pilots.size());
  if (std::abs(power - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "pilots must satisfy (1/T)||s||^2 = 1, got " << power;
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

CMatrix mean_observation(const SceneConfig& config, const CascadedChannel& channel,
                         const CVector& pilots) {
  check_pilots(pilots, config.pilots);
  const CVector f = mrt_precoder(channel.theta_true, config.bs_antennas);
  const CVector column = std::sqrt(config.tx_power_w) * (channel.h * f);
  return column * pilots.transpose();
}

Observation synthesize_observation(const SceneConfig& config, const CascadedChannel& channel,
                                   const CVector& pilots, NoiseStream& noise) {
  Observation obs;
  obs.y = mean_observation(config, channel, pilots);
  obs.seed = noise.seed();
  obs.stream = noise.stream();
  // Column-major draw order keeps one pilot's noise contiguous in the stream.
  for (Eigen::Index t = 0; t < obs.y.cols(); ++t) {
    for (Eigen::Index n = 0; n < obs.y.rows(); ++n) {
      obs.y(n, t) += noise.draw(config.noise_power_w);
    }
  }
  return obs;
}

}  // namespace rispoof
