#include <doctest.h>

#include <cmath>
#include <random>

#include "../support.hpp"
#include "rispoof/bounds.hpp"
#include "rispoof/deception.hpp"
#include "rispoof/solver.hpp"

using namespace rispoof;

namespace {

KernelBasis reference_basis(const SceneConfig& c) {
  return build_basis(c.window(), c.theta_fake, c.theta_true(), c.ris_elements);
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("zero_phase_element conventions") {
    CHECK(zero_phase_element({0.0, 0.0}) == Complex(1.0, 0.0));
    CHECK(std::abs(zero_phase_element({3.0, 0.0}) - Complex(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(zero_phase_element({0.0, -2.0}) - Complex(0.0, -1.0)) < 1e-15);
    CVector x(3);
    x << Complex(0, 0), Complex(-4, 0), Complex(1, 1);
    project_unit_modulus(x);
    CHECK(x.cwiseAbs().isApprox(Eigen::VectorXd::Ones(3)));
    CHECK(x[0] == Complex(1.0, 0.0));
  }

  TEST_CASE("parameter defaults and validation") {
    const SolverParams p = SolverParams::defaults(32);
    CHECK(p.gamma == 0.5);
    CHECK(p.i_max == 500);
    CHECK(p.eps_null == doctest::Approx(1.024e-3));
    CHECK(p.eps_reg == 1e-9);
    SolverParams bad = p;
    bad.gamma = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.i_max = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.eps_null = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  }

  TEST_CASE("without constraints the solver stops before iterating") {
    const CVector w = kernel_vector(Angle::from_degrees(-48), Angle::from_degrees(20), 32);
    const KernelBasis b(w, CMatrix(32, 0));
    const SolveResult r = solve_p3(b, SolverParams::defaults(32));
    CHECK(r.iterations == 0);
    CHECK(r.converged);
    CHECK(r.projections_converged);
    CHECK_FALSE(r.polished);
    CHECK(r.decoy_gain == doctest::Approx(32.0));
    for (int m = 0; m < 32; ++m) CHECK(std::abs(r.profile.values()[m] - w[m]) < 1e-12);
  }

  TEST_CASE("reference design meets the nulling rule and the gain bound") {
    const SceneConfig c = testing::reference_scene();
    const KernelBasis b = reference_basis(c);
    const SolverParams params = testing::reference_scenario().solver_params();
    const SolveResult r = solve_p3(b, params);
    CHECK(r.converged);
    CHECK(r.residual <= params.eps_null);
    CHECK(r.residual == doctest::Approx(b.residual(r.profile.values())));
    CHECK(r.decoy_gain > 0.0);
    const double bound = b.project(b.decoy()).norm() * std::sqrt(32.0);
    CHECK(r.decoy_gain <= bound + 1e-9);
    CHECK(r.decoy_gain <= 32.0 * eta(c.theta_fake, b, c.theta_true()) + 1e-9);
    CHECK(r.profile.values().cwiseAbs().isApprox(Eigen::VectorXd::Ones(32), 1e-12));

    // Every nulling angle sits below sqrt(eps_null) in magnitude.
    const MonostaticKernel k = c.kernel();
    for (const Angle t : c.window().angles()) CHECK(std::abs(k(t, r.profile)) <= std::sqrt(params.eps_null));
  }

  TEST_CASE("the projection step leaves no residual") {
    const SceneConfig c = testing::reference_scene();
    const KernelBasis b = reference_basis(c);
    SolverParams params = SolverParams::defaults(32);
    params.polish = false;
    params.i_max = 50;
    const SolveResult r = solve_p3(b, params);
    REQUIRE(!r.trace.empty());
    CHECK(static_cast<int>(r.trace.size()) == r.iterations);
    for (const auto& rec : r.trace) CHECK(rec.residual_projected < 1e-9);
  }

  TEST_CASE("solves are deterministic") {
    const SceneConfig c = testing::reference_scene();
    const KernelBasis b = reference_basis(c);
    const SolverParams params = SolverParams::defaults(32);
    const SolveResult a = solve_p3(b, params);
    const SolveResult d = solve_p3(b, params);
    CHECK(a.profile.values() == d.profile.values());
    CHECK(a.iterations == d.iterations);
  }

  TEST_CASE("objectives improve over the uniform profile") {
    const SceneConfig c = testing::reference_scene();
    const KernelBasis b = reference_basis(c);
    const SolverParams params = testing::reference_scenario().solver_params();
    const SolveResult r = solve_p3(b, params);
    const RisProfile uni = RisProfile::uniform(32);
    CHECK(objective_p2(r.profile, b, params) > objective_p2(uni, b, params));
    const double p1_opt = objective_p1(r.profile, c.theta_fake, c.window(), c, params);
    const double p1_uni = objective_p1(uni, c.theta_fake, c.window(), c, params);
    CHECK(10.0 * std::log10(p1_opt / p1_uni) > 20.0);
  }

  TEST_CASE("objective_p2 on the null space and for random profiles") {
    const SceneConfig c = testing::reference_scene();
    const KernelBasis b(kernel_vector(Angle(0.3), Angle(0.1), 8), CMatrix(8, 0));
    SolverParams params = SolverParams::defaults(8);
    const RisProfile uni = RisProfile::uniform(8);
    const double num = std::norm(b.decoy().dot(uni.values()));
    CHECK(objective_p2(uni, b, params) == doctest::Approx(num / params.eps_reg));

    const KernelBasis ref = reference_basis(c);
    std::mt19937_64 rng(21);
    for (int i = 0; i < 10; ++i) CHECK(objective_p2(testing::random_profile(32, rng), ref, params) >= 0.0);
  }

  TEST_CASE("objective_p1 collapses to J(fake)/eps under a perfect null") {
    SceneConfig c = testing::reference_scene();
    c.ris_elements = 2;
    c.window_count = 1;
    c.window_half_width = Angle(0.0);
    CVector omega(2);
    omega << 1.0, -1.0;
    const RisProfile p(omega);
    SolverParams params = SolverParams::defaults(2);
    const NullingWindow w = c.window();
    const LinkBudget lb = LinkBudget::from(c);
    const double j_fake = fi_closed(c.theta_fake, p, lb, c.kernel());
    const double base = objective_p1(p, c.theta_fake, w, c, params);
    CHECK(base == doctest::Approx(j_fake / params.eps_reg).epsilon(1e-9));
    params.eps_reg *= 10.0;
    CHECK(objective_p1(p, c.theta_fake, w, c, params) == doctest::Approx(base / 10.0).epsilon(1e-9));
  }

  TEST_CASE("P1 and P2 differ by the kappa ratio on a narrow window") {
    SceneConfig c = testing::reference_scene();
    c.window_half_width = Angle::from_degrees(0.05);
    c.window_count = 3;
    const KernelBasis b = reference_basis(c);
    const SolverParams params = SolverParams::defaults(32);
    std::mt19937_64 rng(4);
    const RisProfile p = testing::random_profile(32, rng);
    const double ratio = objective_p1(p, c.theta_fake, c.window(), c, params) /
                         objective_p2(p, b, params);
    const double expected =
        kappa(c.theta_fake, c.bs_antennas) / kappa(c.theta_true(), c.bs_antennas);
    CHECK(ratio == doctest::Approx(expected).epsilon(1e-3));
  }
}
