#include "rispoof/deception.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rispoof/bounds.hpp"
#include "rispoof/parallel.hpp"

namespace rispoof {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
// Relative slack so that a ratio sitting exactly on its threshold passes
// despite rounding in the two sides.
constexpr double kBoundaryTolerance = 1e-12;

CriterionVerdict kernel_ratio_verdict(double numerator, double decoy_mag, double threshold) {
  CriterionVerdict v;
  v.threshold = threshold;
  v.ratio = decoy_mag == 0.0 ? kInf : numerator / decoy_mag;
  v.ok = decoy_mag != 0.0 && v.ratio <= threshold * (1.0 + kBoundaryTolerance);
  v.margin = threshold - v.ratio;
  return v;
}

void check_rho(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("rho must be finite and > 0");
}
}  // namespace

double leakage_worst(const RisProfile& profile, const NullingWindow& window,
                     const MonostaticKernel& kernel) {
  if (window.count < 1) throw std::invalid_argument("nulling window is empty");
  double worst = 0.0;
  for (const Angle theta : window.angles()) {
    worst = std::max(worst, std::abs(kernel(theta, profile)));
  }
  return worst;
}

double leakage_worst_dense(const RisProfile& profile, const NullingWindow& window,
                           const MonostaticKernel& kernel, int oversample) {
  if (window.count < 1) throw std::invalid_argument("nulling window is empty");
  if (oversample < 1) throw std::invalid_argument("oversample must be >= 1");
  if (window.count == 1) return std::abs(kernel(window.center, profile));
  const NullingWindow dense{window.center, window.half_width, window.count * oversample};
  return leakage_worst(profile, dense, kernel);
}

CriterionVerdict rho_pointwise_ok(const RisProfile& profile, Angle theta_true, Angle theta_fake,
                                  double rho, const SceneConfig& config) {
  check_rho(rho);
  const MonostaticKernel kernel = config.kernel();
  const int n = config.bs_antennas;
  const double threshold = std::sqrt(kappa(theta_fake, n) / (rho * kappa(theta_true, n)));
  return kernel_ratio_verdict(std::abs(kernel(theta_true, profile)),
                              std::abs(kernel(theta_fake, profile)), threshold);
}

CriterionVerdict rho_crb_ratio_ok(const RisProfile& profile, Angle theta_true, Angle theta_fake,
                                  double rho, const SceneConfig& config) {
  check_rho(rho);
  const LinkBudget budget = LinkBudget::from(config);
  const MonostaticKernel kernel = config.kernel();
  const double crb_true = crb(BoundVariant::ClosedForm, theta_true, profile, budget, kernel);
  const double crb_fake = crb(BoundVariant::ClosedForm, theta_fake, profile, budget, kernel);
  CriterionVerdict v;
  v.threshold = rho;
  if (std::isinf(crb_fake)) {
    v.ratio = 0.0;
    v.ok = false;
  } else {
    v.ratio = crb_true / crb_fake;
    v.ok = v.ratio >= rho * (1.0 - kBoundaryTolerance);
  }
  v.margin = v.ratio - rho;
  return v;
}

CriterionVerdict rho_band_ok(const RisProfile& profile, const NullingWindow& window,
                             Angle theta_fake, double rho, const SceneConfig& config) {
  check_rho(rho);
  const MonostaticKernel kernel = config.kernel();
  const int n = config.bs_antennas;
  const double threshold = std::sqrt(kappa(theta_fake, n) / (rho * kappa_min(window, n)));
  return kernel_ratio_verdict(leakage_worst(profile, window, kernel),
                              std::abs(kernel(theta_fake, profile)), threshold);
}

double kappa_min(const NullingWindow& window, int antennas) {
  if (window.count < 1) throw std::invalid_argument("nulling window is empty");
  double lowest = kInf;
  for (const Angle theta : window.angles()) lowest = std::min(lowest, kappa(theta, antennas));
  return lowest;
}

double eta(Angle theta, const KernelBasis& basis, Angle theta_true) {
  const int m = basis.elements();
  return basis.project(kernel_vector(theta, theta_true, m)).norm() / std::sqrt(double(m));
}

double rho_upper_bound(Angle theta, double leakage_cap, const SceneConfig& config,
                       const KernelBasis& basis) {
  return score_decoy(theta, leakage_cap, config, basis).rho_ub;
}

DecoyScore score_decoy(Angle theta, double leakage_cap, const SceneConfig& config,
                       const KernelBasis& basis) {
  if (!(leakage_cap > 0.0)) throw std::invalid_argument("leakage cap must be > 0");
  const double m = basis.elements();
  DecoyScore s;
  s.theta = theta;
  s.eta = eta(theta, basis, config.theta_true());
  s.phi = s.eta * std::sqrt(kappa(theta, config.bs_antennas));
  s.rho_ub = m * m * s.phi * s.phi /
             (kappa_min(config.window(), config.bs_antennas) * leakage_cap * leakage_cap);
  return s;
}

KernelBasis scene_basis(const SceneConfig& config) {
  return build_basis(config.window(), config.theta_fake, config.theta_true(),
                     config.ris_elements);
}

double realized_rho(const RisProfile& profile, Angle theta_true, Angle theta_fake,
                    const SceneConfig& config) {
  const LinkBudget budget = LinkBudget::from(config);
  const MonostaticKernel kernel = config.kernel();
  const double fi_true = fi_closed(theta_true, profile, budget, kernel);
  const double fi_fake = fi_closed(theta_fake, profile, budget, kernel);
  if (fi_true == 0.0) return kInf;
  return fi_fake / fi_true;
}

Shortlist shortlist_decoys(const AngleGrid& grid, const SceneConfig& config, double leakage_cap,
                           int top_n, const SolverParams& params) {
  if (top_n < 0) throw std::invalid_argument("top_n must be >= 0");
  const NullingWindow window = config.window();
  const KernelBasis basis = scene_basis(config);

  Shortlist out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (window.contains(grid[i])) continue;
    out.by_bound.push_back(score_decoy(grid[i], leakage_cap, config, basis));
  }
  if (out.by_bound.empty()) {
    throw std::invalid_argument("no admissible decoy angle outside the nulling window");
  }
  std::stable_sort(out.by_bound.begin(), out.by_bound.end(),
                   [](const DecoyScore& a, const DecoyScore& b) { return a.rho_ub > b.rho_ub; });

  const std::size_t n = std::min<std::size_t>(top_n, out.by_bound.size());
  out.by_realized.resize(n);
  const MonostaticKernel kernel = config.kernel();
  parallel_for(n, [&](std::size_t i) {
    const DecoyScore& cand = out.by_bound[i];
    const KernelBasis b = build_basis(window, cand.theta, config.theta_true(), config.ris_elements);
    const SolveResult solved = solve_p3(b, params);
    ShortlistEntry& e = out.by_realized[i];
    e.theta = cand.theta;
    e.rho_ub = cand.rho_ub;
    e.realized_rho = realized_rho(solved.profile, config.theta_true(), cand.theta, config);
    e.leakage = leakage_worst(solved.profile, window, kernel);
    e.decoy_gain = solved.decoy_gain;
    e.converged = solved.converged;
  });
  std::stable_sort(out.by_realized.begin(), out.by_realized.end(),
                   [](const ShortlistEntry& a, const ShortlistEntry& b) {
                     return a.realized_rho > b.realized_rho;
                   });
  return out;
}

DeceptionReport deception_report(const RisProfile& profile, const SceneConfig& config,
                                 const std::vector<double>& rho_levels) {
  const NullingWindow window = config.window();
  const MonostaticKernel kernel = config.kernel();
  DeceptionReport r;
  r.leakage_worst = leakage_worst(profile, window, kernel);
  r.decoy_mag = std::abs(kernel(config.theta_fake, profile));
  r.leakage_ratio = r.decoy_mag == 0.0 ? kInf : r.leakage_worst / r.decoy_mag;
  r.realized_rho = realized_rho(profile, config.theta_true(), config.theta_fake, config);
  r.kappa_min = kappa_min(window, config.bs_antennas);
  const double kf = kappa(config.theta_fake, config.bs_antennas);
  for (const double rho : rho_levels) {
    check_rho(rho);
    r.thresholds[rho] = std::sqrt(kf / (rho * r.kappa_min));
  }
  return r;
}

}  // namespace rispoof
