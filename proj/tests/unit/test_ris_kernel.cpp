#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "../support.hpp"
#include "rispoof/errors.hpp"
#include "rispoof/ris_kernel.hpp"

using namespace rispoof;

TEST_SUITE("ris_kernel") {
  TEST_CASE("profile rejects non unit-modulus entries") {
    CVector v = CVector::Ones(4);
    v[2] = 0.5;
    CHECK_THROWS_AS(RisProfile{v}, std::invalid_argument);
    CHECK_NOTHROW(RisProfile{CVector::Ones(4)});
  }

  TEST_CASE("phases round-trip through from_phases") {
    std::mt19937_64 rng(7);
    const RisProfile p = testing::random_profile(16, rng);
    const RisProfile q = RisProfile::from_phases(p.phases());
    CHECK((p.values() - q.values()).norm() < 1e-12);
  }

  TEST_CASE("kernel vector with equal angles is all ones") {
    const CVector u = kernel_vector(Angle::from_degrees(33), Angle::from_degrees(33), 9);
    CHECK((u - CVector::Ones(9)).norm() < 1e-12);
  }

  TEST_CASE("kernel vector with the departure flipped by pi") {
    const Angle t = Angle::from_degrees(25.0);
    const CVector u = kernel_vector(Angle(t.radians() + M_PI), t, 8);
    for (int m = 0; m < 8; ++m) {
      CHECK(std::abs(u[m] - std::exp(Complex(0.0, 2.0 * M_PI * m * std::sin(t.radians())))) <
            1e-12);
    }
  }

  TEST_CASE("kernel vector entry phase for the reference decoy") {
    const CVector u = kernel_vector(Angle::from_degrees(-48), Angle::from_degrees(20), 32);
    const double expected = M_PI * (std::sin(deg2rad(20)) - std::sin(deg2rad(-48)));
    CHECK(expected / M_PI == doctest::Approx(1.0852).epsilon(1e-4));
    CHECK(std::abs(u[1] - std::exp(Complex(0.0, expected))) < 1e-12);
  }

  TEST_CASE("beta of the uniform profile with equal angles is M") {
    const Complex b = beta(Angle(0.3), Angle(0.3), RisProfile::uniform(32));
    CHECK(std::abs(b - Complex(32.0, 0.0)) < 1e-12);
  }

  TEST_CASE("beta matches the diagonal-matrix form and is bounded by M") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ang(-1.4, 1.4);
    for (int trial = 0; trial < 20; ++trial) {
      const RisProfile p = testing::random_profile(24, rng);
      const double out = ang(rng), in = ang(rng);
      const Complex b = beta(Angle(out), Angle(in), p);
      const CVector a_out = testing::oracle::steer(24, out);
      const CVector a_in = testing::oracle::steer(24, in);
      const Complex diag = a_in.dot(p.values().asDiagonal() * a_out);
      CHECK(std::abs(b - diag) < 1e-10);
      CHECK(std::abs(b - testing::oracle::beta(out, in, p.values())) < 1e-10);
      CHECK(std::abs(b) <= 24.0 + 1e-12);
    }
  }

  TEST_CASE("phase-aligned profile reaches |beta| = M") {
    const CVector u = kernel_vector(Angle(-0.4), Angle(0.7), 20);
    CVector omega(20);
    for (int m = 0; m < 20; ++m) omega[m] = std::polar(1.0, std::arg(u[m]));
    CHECK(std::abs(beta(Angle(-0.4), Angle(0.7), RisProfile(omega))) == doctest::Approx(20.0));
  }

  TEST_CASE("monostatic conventions") {
    const RisProfile uni = RisProfile::uniform(12);
    CHECK(std::abs(beta_bar(Angle(0.0), uni, KernelConvention::SpecularPlusPi) - 12.0) < 1e-12);
    const Angle t = Angle::from_degrees(14.0);
    // kernel^H omega for omega = 1 is the conjugate of sum_m exp(j 2 pi m sin t).
    Complex sum = 0.0;
    for (int m = 0; m < 12; ++m) sum += std::exp(Complex(0.0, 2.0 * M_PI * m * std::sin(t.radians())));
    CHECK(std::abs(beta_bar(t, uni, KernelConvention::SpecularPlusPi) - std::conj(sum)) < 1e-10);

    const Angle truth = Angle::from_degrees(20.0);
    CHECK(std::abs(beta_bar(t, uni, KernelConvention::FixedIncidence, truth) -
                   beta(t, truth, uni)) < 1e-12);
    CHECK_THROWS_AS(beta_bar(t, uni, KernelConvention::FixedIncidence), std::invalid_argument);
    const MonostaticKernel k = MonostaticKernel::fixed_incidence(truth);
    CHECK(std::abs(k(t, uni) - beta(t, truth, uni)) < 1e-12);
  }

  TEST_CASE("nulling window samples are uniform and inclusive") {
    const NullingWindow w =
        NullingWindow::uniform(Angle::from_degrees(20), Angle::from_degrees(3), 10);
    const auto a = w.angles();
    REQUIRE(a.size() == 10);
    CHECK(a.front().degrees() == doctest::Approx(17.0));
    CHECK(a.back().degrees() == doctest::Approx(23.0));
    CHECK(w.contains(Angle::from_degrees(21.0)));
    CHECK_FALSE(w.contains(Angle::from_degrees(-48.0)));
  }

  TEST_CASE("rank-one projector for a single all-ones nulling kernel") {
    const Angle truth = Angle::from_degrees(10);
    const KernelBasis b = build_basis(std::vector<Angle>{truth}, Angle::from_degrees(-30), truth, 8);
    const CMatrix expected = CMatrix::Identity(8, 8) - CMatrix::Ones(8, 8) / 8.0;
    CHECK((b.projector() - expected).norm() < 1e-12);
  }

  TEST_CASE("reference basis has rank K and a 0/1 projector spectrum") {
    const Angle truth = Angle::from_degrees(20);
    const KernelBasis b = build_basis(
        NullingWindow::uniform(truth, Angle::from_degrees(3), 10), Angle::from_degrees(-48), truth, 32);
    CHECK(b.constraints() == 10);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(b.projector());
    int zeros = 0, ones = 0;
    for (int i = 0; i < 32; ++i) {
      const double ev = es.eigenvalues()[i];
      if (std::abs(ev) < 1e-8) ++zeros;
      if (std::abs(ev - 1.0) < 1e-8) ++ones;
    }
    CHECK(zeros == 10);
    CHECK(ones == 22);
    const CMatrix& p = b.projector();
    CHECK((p * p - p).norm() < 1e-9);
    CHECK((p - p.adjoint()).norm() < 1e-12);
    CHECK((b.nulling().adjoint() * p).norm() < 1e-8);
    CHECK(b.project(b.decoy()).norm() <= std::sqrt(32.0) + 1e-12);

    std::mt19937_64 rng(3);
    const CVector x = testing::random_profile(32, rng).values();
    CHECK((b.project(x) - p * x).norm() < 1e-10);
    CVector y = x, scratch(10);
    b.project_in_place(y, scratch);
    CHECK((y - p * x).norm() < 1e-10);
    CHECK(b.residual(x) == doctest::Approx((b.nulling().adjoint() * x).squaredNorm()));
  }

  TEST_CASE("infeasible bases name the violated condition") {
    const Angle truth = Angle::from_degrees(20);
    const auto window = NullingWindow::uniform(truth, Angle::from_degrees(3), 10);
    try {
      build_basis(window, Angle::from_degrees(-48), truth, 16);
      FAIL("expected InfeasibleError");
    } catch (const InfeasibleError& e) {
      CHECK(std::string(e.what()).find("M >= 2K") != std::string::npos);
    }
    CHECK_THROWS_AS(build_basis(window, truth, truth, 32), InfeasibleError);
    // Two samples aliased onto the same kernel vector.
    CHECK_THROWS_AS(build_basis(std::vector<Angle>{Angle(0.1), Angle(0.1)}, Angle(-0.8), truth, 8),
                    InfeasibleError);
  }

  TEST_CASE("empty nulling set yields the identity projector") {
    const KernelBasis b(kernel_vector(Angle(0.2), Angle(0.3), 6), CMatrix(6, 0));
    CHECK((b.projector() - CMatrix::Identity(6, 6)).norm() < 1e-15);
    CHECK(b.residual(CVector::Ones(6)) == 0.0);
  }
}
