#include "rispoof/radar_ml.hpp"

#include <cmath>
#include <stdexcept>

#include "rispoof/parallel.hpp"

namespace rispoof {

CMatrix sample_covariance(const CMatrix& y) {
  if (y.cols() < 1) throw std::invalid_argument("covariance needs at least one snapshot");
  CMatrix r = (y * y.adjoint()) / static_cast<double>(y.cols());
  // Symmetrize away rounding so R is Hermitian to the last bit.
  return 0.5 * (r + r.adjoint());
}

namespace {

CMatrix steering_matrix(const AngleGrid& grid, int antennas) {
  CMatrix a(antennas, static_cast<Eigen::Index>(grid.size()));
  for (std::size_t g = 0; g < grid.size(); ++g) a.col(g) = steering(antennas, grid[g]);
  return a;
}

MlSpectrum spectrum_from(const CMatrix& covariance, const AngleGrid& grid, const CMatrix& a) {
  if (grid.empty()) throw std::invalid_argument("ML grid is empty");
  if (covariance.rows() != a.rows() || covariance.cols() != a.rows()) {
    throw std::invalid_argument("covariance size does not match the array");
  }
  MlSpectrum s{grid, std::vector<double>(grid.size()), 0, grid[0], -1.0};
  const CMatrix ra = covariance * a;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double v = std::norm(a.col(g).dot(ra.col(g)));
    s.values[g] = v;
    if (v > s.peak_value) {
      s.peak_value = v;
      s.peak_index = g;
    }
  }
  s.peak_theta = grid[s.peak_index];
  return s;
}

}  // namespace

MlSpectrum ml_spectrum(const CMatrix& covariance, const AngleGrid& grid, int antennas) {
  if (grid.empty()) throw std::invalid_argument("ML grid is empty");
  return spectrum_from(covariance, grid, steering_matrix(grid, antennas));
}

AngleGrid default_ml_grid() { return AngleGrid::interior_degrees(-89.0, 89.0, 0.1); }

const char* to_string(TrialClass c) {
  switch (c) {
    case TrialClass::Decoyed: return "decoyed";
    case TrialClass::Revealed: return "revealed";
    case TrialClass::Elsewhere: return "elsewhere";
  }
  return "?";
}

TrialClass classify(Angle estimate, Angle theta_true, Angle theta_fake, Angle tolerance) {
  const double to_true = std::abs(estimate.radians() - theta_true.radians());
  const double to_fake = std::abs(estimate.radians() - theta_fake.radians());
  const double tol = tolerance.radians();
  if (to_fake <= to_true) {
    if (to_fake <= tol) return TrialClass::Decoyed;
  } else if (to_true <= tol) {
    return TrialClass::Revealed;
  }
  return TrialClass::Elsewhere;
}

TrialAggregate run_trials(const SceneConfig& config, const RisProfile& profile, int n_trials,
                          const AngleGrid& grid, const TrialOptions& options) {
  if (n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");
  config.validate();
  const CascadedChannel channel = cascaded_channel(config, profile);
  const CVector pilots = constant_pilots(config.pilots);
  const CMatrix a = steering_matrix(grid, config.bs_antennas);
  const Angle theta_true = config.theta_true();

  TrialAggregate agg;
  agg.n_trials = n_trials;
  agg.trials.resize(n_trials);
  parallel_for(
      static_cast<std::size_t>(n_trials),
      [&](std::size_t i) {
        NoiseStream noise(config.seed, i);
        const Observation obs = synthesize_observation(config, channel, pilots, noise);
        const MlSpectrum s = spectrum_from(sample_covariance(obs), grid, a);
        TrialResult& r = agg.trials[i];
        r.estimated_theta = s.peak_theta;
        r.true_theta = theta_true;
        r.fake_theta = config.theta_fake;
        r.classified = classify(s.peak_theta, theta_true, config.theta_fake, options.tolerance);
        r.seed = config.seed;
        r.stream = i;
      },
      options.workers);

  double sum = 0.0, sq_fake = 0.0, sq_true = 0.0;
  for (const TrialResult& r : agg.trials) {
    const double est = r.estimated_theta.radians();
    sum += est;
    sq_fake += std::pow(est - config.theta_fake.radians(), 2);
    sq_true += std::pow(est - theta_true.radians(), 2);
    switch (r.classified) {
      case TrialClass::Decoyed: ++agg.decoyed; break;
      case TrialClass::Revealed: ++agg.revealed; break;
      case TrialClass::Elsewhere: ++agg.elsewhere; break;
    }
  }
  const double n = n_trials;
  agg.decoyed_rate = agg.decoyed / n;
  agg.revealed_rate = agg.revealed / n;
  agg.elsewhere_rate = agg.elsewhere / n;
  agg.rmse_to_fake = std::sqrt(sq_fake / n);
  agg.rmse_to_true = std::sqrt(sq_true / n);
  agg.mean_estimate = sum / n;
  double var = 0.0;
  for (const TrialResult& r : agg.trials) {
    var += std::pow(r.estimated_theta.radians() - agg.mean_estimate, 2);
  }
  agg.variance = n_trials > 1 ? var / (n - 1.0) : 0.0;
  return agg;
}

}  // namespace rispoof
