#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "rispoof/geometry.hpp"
#include "rispoof/ris_kernel.hpp"

namespace rispoof {

inline constexpr double kSpeedOfLight = 299'792'458.0;

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

/// Physical scenario. Powers in watts, angles in radians, distances in meters.
struct SceneConfig {
  double carrier_hz = 20e9;
  int bs_antennas = 16;
  int ris_elements = 32;
  Eigen::Vector2d ris_position{48.0, 17.0};
  int pilots = 50;
  double tx_power_w = 0.1;
  double noise_power_w = 1e-11;
  Angle theta_fake = Angle::from_degrees(-48.0);
  /// When set, overrides the bearing of ris_position.
  std::optional<Angle> theta_true_pinned;
  Angle window_half_width = Angle::from_degrees(3.0);
  int window_count = 10;
  KernelConvention convention = KernelConvention::FixedIncidence;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument on the first violated invariant.
  void validate() const;

  double wavelength() const { return kSpeedOfLight / carrier_hz; }
  Angle theta_true_derived() const { return bearing(ris_position); }
  Angle theta_true() const { return theta_true_pinned.value_or(theta_true_derived()); }
  NullingWindow window() const;
  MonostaticKernel kernel() const;
};

/// (lambda / (4 pi ||p||))^2.
double attenuation(const Eigen::Vector2d& ris_position, double carrier_hz);

/// Maximum-ratio transmit vector steering(N, theta) / sqrt(N).
CVector mrt_precoder(Angle theta, int antennas);

struct CascadedChannel {
  CMatrix h;
  double a_ris = 0.0;
  Angle theta_true;
  /// RIS response that scales the rank-one outer product.
  Complex kernel_gain;
};

/// a_RIS * a_N(theta_true) * beta * a_N(theta_true)^H, with the incident
/// angle at the RIS equal to theta_true and the departure angle set by the
/// scene's kernel convention (theta_true + pi, or theta_true itself).
CascadedChannel cascaded_channel(const SceneConfig& config, const RisProfile& profile);

/// s_t = 1 for all t; satisfies (1/T)||s||^2 = 1.
CVector constant_pilots(int count);

/// Reproducible noise source. Every (seed, stream) pair yields an independent
/// sequence, so Monte-Carlo trials can be drawn in any order.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::uint64_t stream);

  /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  Complex draw(double variance);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

struct Observation {
  CMatrix y;  // N x T
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// Y = sqrt(P) H f s^T + noise, with f the MRT precoder toward the true angle.
/// Pilots must satisfy (1/T)||s||^2 = 1 within 1e-9; they are not rescaled.
Observation synthesize_observation(const SceneConfig& config, const CascadedChannel& channel,
                                   const CVector& pilots, NoiseStream& noise);

/// Noise-free mean sqrt(P) H f s^T.
CMatrix mean_observation(const SceneConfig& config, const CascadedChannel& channel,
                         const CVector& pilots);

}  // namespace rispoof
