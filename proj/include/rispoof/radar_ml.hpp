#pragma once

#include <cstdint>
#include <vector>

#include "rispoof/channel.hpp"
#include "rispoof/geometry.hpp"
#include "rispoof/ris_kernel.hpp"

namespace rispoof {

/// R = Y Y^H / T.
CMatrix sample_covariance(const CMatrix& y);
inline CMatrix sample_covariance(const Observation& obs) { return sample_covariance(obs.y); }

struct MlSpectrum {
  AngleGrid grid;
  /// |a^H(theta) R a(theta)|^2 per grid angle.
  std::vector<double> values;
  std::size_t peak_index = 0;
  Angle peak_theta;
  double peak_value = 0.0;
};

/// Grid search of |a_N^H R a_N|^2. Ties go to the lowest grid index.
MlSpectrum ml_spectrum(const CMatrix& covariance, const AngleGrid& grid, int antennas);

/// 0.1 deg spacing strictly inside (-89, 89) deg.
AngleGrid default_ml_grid();

enum class TrialClass { Decoyed, Revealed, Elsewhere };

const char* to_string(TrialClass c);

/// Nearest of the two reference angles, provided it lies within `tolerance`.
TrialClass classify(Angle estimate, Angle theta_true, Angle theta_fake,
                    Angle tolerance = Angle::from_degrees(1.0));

struct TrialResult {
  Angle estimated_theta;
  Angle true_theta;
  Angle fake_theta;
  TrialClass classified = TrialClass::Elsewhere;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

struct TrialOptions {
  Angle tolerance = Angle::from_degrees(1.0);
  /// 0 = hardware concurrency.
  unsigned workers = 0;
};

struct TrialAggregate {
  int n_trials = 0;
  int decoyed = 0;
  int revealed = 0;
  int elsewhere = 0;
  double decoyed_rate = 0.0;
  double revealed_rate = 0.0;
  double elsewhere_rate = 0.0;
  /// Root-mean-square error of the estimates about the decoy / true angle (rad).
  double rmse_to_fake = 0.0;
  double rmse_to_true = 0.0;
  double mean_estimate = 0.0;
  /// Sample variance of the estimates about their own mean (rad^2).
  double variance = 0.0;
  std::vector<TrialResult> trials;
};

/// Monte-Carlo ML estimation at the adversary. Trial i draws its noise from
/// NoiseStream(config.seed, i), so the aggregate is independent of scheduling.
TrialAggregate run_trials(const SceneConfig& config, const RisProfile& profile, int n_trials,
                          const AngleGrid& grid, const TrialOptions& options = {});

}  // namespace rispoof
