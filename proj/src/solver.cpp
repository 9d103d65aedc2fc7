#include "rispoof/solver.hpp"

#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>
#include <glog/logging.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

#include "rispoof/bounds.hpp"
#include "rispoof/errors.hpp"

namespace rispoof {

SolverParams SolverParams::defaults(int elements) {
  SolverParams p;
  p.eps_null = 1e-6 * static_cast<double>(elements) * elements;
  return p;
}

void SolverParams::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
  if (i_max < 1) throw std::invalid_argument("i_max must be >= 1");
  if (!(eps_null > 0.0)) throw std::invalid_argument("eps_null must be > 0");
  if (!(eps_reg > 0.0)) throw std::invalid_argument("eps_reg must be > 0");
  if (polish_max_iterations < 0) throw std::invalid_argument("polish_max_iterations must be >= 0");
}

Complex zero_phase_element(Complex z) {
  const double mag = std::abs(z);
  if (mag == 0.0) return {1.0, 0.0};
  return z / mag;
}

void project_unit_modulus(CVector& x) {
  for (Eigen::Index m = 0; m < x.size(); ++m) x[m] = zero_phase_element(x[m]);
}

namespace {

bool all_finite(const CVector& x) {
  for (Eigen::Index m = 0; m < x.size(); ++m) {
    if (!std::isfinite(x[m].real()) || !std::isfinite(x[m].imag())) return false;
  }
  return true;
}

// -log|w^H x|^2 + log(eps + ||V^H x||^2) over the phases of x.
class LogRatioCost final : public ceres::FirstOrderFunction {
 public:
  LogRatioCost(const CVector& w, const CMatrix& v, double eps)
      : w_(w), v_(v), eps_(eps), x_(w.size()), r_(v.cols()), vr_(w.size()) {}

  bool Evaluate(const double* phases, double* cost, double* gradient) const override {
    const Eigen::Index m = w_.size();
    for (Eigen::Index i = 0; i < m; ++i) x_[i] = std::polar(1.0, phases[i]);
    const Complex a = w_.dot(x_);
    r_.noalias() = v_.adjoint() * x_;
    const double num = std::norm(a);
    const double den = eps_ + r_.squaredNorm();
    if (num == 0.0 || !std::isfinite(den)) return false;
    cost[0] = -std::log(num) + std::log(den);
    if (gradient != nullptr) {
      vr_.noalias() = v_ * r_;
      const Complex j(0.0, 1.0);
      for (Eigen::Index i = 0; i < m; ++i) {
        const Complex dx = j * x_[i];
        const double dnum = 2.0 * std::real(std::conj(a) * std::conj(w_[i]) * dx);
        const double dden = 2.0 * std::real(std::conj(vr_[i]) * dx);
        gradient[i] = -dnum / num + dden / den;
      }
    }
    return true;
  }

  int NumParameters() const override { return static_cast<int>(w_.size()); }

 private:
  const CVector& w_;
  const CMatrix& v_;
  double eps_;
  mutable CVector x_;
  mutable CVector r_;
  mutable CVector vr_;
};

// Ceres reports recoverable L-BFGS restarts as glog warnings; they are
// expected on this nonconvex objective, so only errors are let through.
void quiet_ceres_warnings() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (FLAGS_minloglevel < google::GLOG_ERROR) FLAGS_minloglevel = google::GLOG_ERROR;
  });
}

int polish_phases(const KernelBasis& basis, const SolverParams& params, CVector& x) {
  quiet_ceres_warnings();
  Eigen::VectorXd phases(x.size());
  for (Eigen::Index m = 0; m < x.size(); ++m) phases[m] = std::arg(x[m]);

  ceres::GradientProblem problem(
      new LogRatioCost(basis.decoy(), basis.nulling(), params.eps_reg));
  ceres::GradientProblemSolver::Options options;
  options.line_search_direction_type = ceres::LBFGS;
  options.max_lbfgs_rank = 30;
  options.max_num_iterations = params.polish_max_iterations;
  options.function_tolerance = 1e-16;
  options.gradient_tolerance = 1e-14;
  options.parameter_tolerance = 1e-16;
  options.logging_type = ceres::SILENT;
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(options, problem, phases.data(), &summary);

  for (Eigen::Index m = 0; m < x.size(); ++m) x[m] = std::polar(1.0, phases[m]);
  return static_cast<int>(summary.iterations.size()) - 1;
}

}  // namespace

SolveResult solve_p3(const KernelBasis& basis, const SolverParams& params) {
  params.validate();
  const CVector& w = basis.decoy();
  const CMatrix& v = basis.nulling();
  const Eigen::Index m = w.size();

  CVector x = w;
  project_unit_modulus(x);
  CVector u(m);
  CVector scratch(basis.constraints());
  CVector r(basis.constraints());

  auto residual_of = [&](const CVector& z) {
    if (v.cols() == 0) return 0.0;
    r.noalias() = v.adjoint() * z;
    return r.squaredNorm();
  };

  SolveResult result{RisProfile::uniform(static_cast<int>(m)), 0, 0, 0.0, 0.0, {}, false,
                     false, false};
  if (params.record_trace) result.trace.reserve(params.i_max);

  double residual = residual_of(x);
  int iterations = 0;
  bool stopped = residual <= params.eps_null;
  while (!stopped && iterations < params.i_max) {
    u = (1.0 - params.gamma) * x + params.gamma * w;
    project_unit_modulus(u);
    basis.project_in_place(u, scratch);
    const double projected = params.record_trace ? residual_of(u) : 0.0;
    x = u;
    project_unit_modulus(x);
    ++iterations;
    if (!all_finite(x)) {
      throw NumericalError("non-finite iterate in alternating projections at iteration " +
                           std::to_string(iterations));
    }
    residual = residual_of(x);
    if (params.record_trace) {
      result.trace.push_back({projected, residual, std::abs(w.dot(x))});
    }
    stopped = residual <= params.eps_null;
  }
  result.iterations = iterations;
  result.projections_converged = stopped;

  if (!stopped && params.polish && params.polish_max_iterations > 0 && v.cols() > 0) {
    CVector polished = x;
    const int steps = polish_phases(basis, params, polished);
    if (!all_finite(polished)) throw NumericalError("non-finite profile after phase refinement");
    result.polish_iterations = steps;
    result.polished = true;
    x = polished;
    residual = residual_of(x);
  }

  result.profile = RisProfile(x);
  result.residual = residual;
  result.decoy_gain = std::abs(w.dot(x));
  result.converged = residual <= params.eps_null;
  return result;
}

double objective_p1(const RisProfile& profile, Angle theta_fake, const NullingWindow& window,
                    const SceneConfig& config, const SolverParams& params) {
  const LinkBudget budget = LinkBudget::from(config);
  const MonostaticKernel kernel = config.kernel();
  double leak = 0.0;
  for (const Angle theta : window.angles()) leak += fi_closed(theta, profile, budget, kernel);
  return fi_closed(theta_fake, profile, budget, kernel) / (params.eps_reg + leak);
}

double objective_p2(const RisProfile& profile, const KernelBasis& basis,
                    const SolverParams& params) {
  const double num = std::norm(basis.decoy().dot(profile.values()));
  return num / (params.eps_reg + basis.residual(profile.values()));
}

}  // namespace rispoof
