#pragma once

#include <vector>

#include "rispoof/channel.hpp"
#include "rispoof/ris_kernel.hpp"

namespace rispoof {

struct SolverParams {
  double gamma = 0.5;
  int i_max = 500;
  /// Threshold on ||V^H x||^2.
  double eps_null = 1e-6 * 32 * 32;
  /// Regularizer in the P1/P2 ratios.
  double eps_reg = 1e-9;
  /// When the alternating projections stall above eps_null, continue from
  /// their output with an L-BFGS ascent of the P2 ratio over the phases.
  bool polish = true;
  int polish_max_iterations = 40000;
  bool record_trace = true;

  /// Defaults with eps_null scaled to the RIS size.
  static SolverParams defaults(int elements);
  /// Throws std::invalid_argument on out-of-range knobs.
  void validate() const;
};

struct IterationRecord {
  /// ||V^H u||^2 right after the P_S step (zero up to rounding).
  double residual_projected = 0.0;
  /// ||V^H x||^2 after the final unit-modulus normalization.
  double residual = 0.0;
  double decoy_gain = 0.0;
};

struct SolveResult {
  RisProfile profile;
  /// Alternating-projection iterations executed (0 if x0 already met the rule).
  int iterations = 0;
  int polish_iterations = 0;
  double residual = 0.0;
  double decoy_gain = 0.0;
  std::vector<IterationRecord> trace;
  /// True if the stopping rule of the alternating projections fired.
  bool projections_converged = false;
  /// True if the returned profile satisfies residual <= eps_null.
  bool converged = false;
  bool polished = false;
};

/// Unit-modulus projection of one entry; zero maps to 1.
Complex zero_phase_element(Complex z);

/// Element-wise exp(j arg x) with the zero tie-break.
void project_unit_modulus(CVector& x);

/// Relaxed alternating projections between null(V^H) and the unit-modulus set:
///   x0 = exp(j arg w)
///   u = (1 - gamma) x + gamma w;  u = Pi_T(u);  u = P_S u;  x = Pi_T(u)
///   stop once ||V^H x||^2 <= eps_null.
/// The loop body performs no heap allocation. Throws NumericalError if an
/// iterate becomes non-finite.
SolveResult solve_p3(const KernelBasis& basis, const SolverParams& params);

/// FI ratio J(theta_fake) / (eps + sum_k J(theta_k)) using the closed-form FI.
double objective_p1(const RisProfile& profile, Angle theta_fake, const NullingWindow& window,
                    const SceneConfig& config, const SolverParams& params);

/// |w^H omega|^2 / (eps + ||V^H omega||^2).
double objective_p2(const RisProfile& profile, const KernelBasis& basis,
                    const SolverParams& params);

}  // namespace rispoof
