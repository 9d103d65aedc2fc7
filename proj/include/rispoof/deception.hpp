#pragma once

#include <map>
#include <vector>

#include "rispoof/channel.hpp"
#include "rispoof/ris_kernel.hpp"
#include "rispoof/solver.hpp"

namespace rispoof {

/// max |beta_bar| over the K window angles.
double leakage_worst(const RisProfile& profile, const NullingWindow& window,
                     const MonostaticKernel& kernel);

/// Same maximum over an oversampled continuum of the window (count * oversample
/// points, endpoints included). Reporting only.
double leakage_worst_dense(const RisProfile& profile, const NullingWindow& window,
                           const MonostaticKernel& kernel, int oversample = 10);

struct CriterionVerdict {
  bool ok = false;
  /// threshold - ratio for the kernel forms; crb_ratio - rho for the CRB form.
  double margin = 0.0;
  double ratio = 0.0;
  double threshold = 0.0;
};

/// |beta_bar(true) / beta_bar(fake)| <= sqrt(kappa(fake) / (rho kappa(true))).
/// A zero decoy response is an automatic failure with infinite ratio.
CriterionVerdict rho_pointwise_ok(const RisProfile& profile, Angle theta_true, Angle theta_fake,
                                  double rho, const SceneConfig& config);

/// CRB(true) / CRB(fake) >= rho with both bounds from fi_closed.
CriterionVerdict rho_crb_ratio_ok(const RisProfile& profile, Angle theta_true, Angle theta_fake,
                                  double rho, const SceneConfig& config);

/// L_true / |beta_bar(fake)| <= sqrt(kappa(fake) / (rho kappa_min)). A true
/// verdict guarantees CRB(theta) >= rho CRB(fake) at every window angle.
CriterionVerdict rho_band_ok(const RisProfile& profile, const NullingWindow& window,
                             Angle theta_fake, double rho, const SceneConfig& config);

/// min over window angles of kappa.
double kappa_min(const NullingWindow& window, int antennas);

/// ||P_S w(theta)|| / sqrt(M) with w(theta) = kernel_vector(theta, theta_true).
/// Only the nulling part of the basis is used.
double eta(Angle theta, const KernelBasis& basis, Angle theta_true);

struct DecoyScore {
  Angle theta;
  double eta = 0.0;
  /// eta * sqrt(kappa(theta)).
  double phi = 0.0;
  double rho_ub = 0.0;
};

/// M^2 eta^2 kappa(theta) / (kappa_min L^2).
double rho_upper_bound(Angle theta, double leakage_cap, const SceneConfig& config,
                       const KernelBasis& basis);

DecoyScore score_decoy(Angle theta, double leakage_cap, const SceneConfig& config,
                       const KernelBasis& basis);

/// The nulling basis of the scene (decoy column = theta_fake).
KernelBasis scene_basis(const SceneConfig& config);

/// CRB(true) / CRB(fake) from fi_closed; +inf if the true-angle FI vanishes.
double realized_rho(const RisProfile& profile, Angle theta_true, Angle theta_fake,
                    const SceneConfig& config);

struct ShortlistEntry {
  Angle theta;
  double rho_ub = 0.0;
  double realized_rho = 0.0;
  double leakage = 0.0;
  double decoy_gain = 0.0;
  bool converged = false;
};

struct Shortlist {
  /// Every admissible grid angle, sorted by rho_ub (descending, stable).
  std::vector<DecoyScore> by_bound;
  /// The top_n candidates after solving, sorted by realized rho (descending).
  std::vector<ShortlistEntry> by_realized;
};

/// Ranks grid angles outside the window by rho_ub, solves the top_n and re-ranks
/// them by realized rho. Throws std::invalid_argument if no admissible angle
/// remains.
Shortlist shortlist_decoys(const AngleGrid& grid, const SceneConfig& config, double leakage_cap,
                           int top_n, const SolverParams& params);

struct DeceptionReport {
  double leakage_worst = 0.0;
  double decoy_mag = 0.0;
  double leakage_ratio = 0.0;
  double realized_rho = 0.0;
  std::map<double, double> thresholds;
  double kappa_min = 0.0;
};

DeceptionReport deception_report(const RisProfile& profile, const SceneConfig& config,
                                 const std::vector<double>& rho_levels);

}  // namespace rispoof
