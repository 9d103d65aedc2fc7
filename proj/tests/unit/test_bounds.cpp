#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "../support.hpp"
#include "rispoof/bounds.hpp"

using namespace rispoof;

namespace {

// 2PT a^2 |beta_bar|^2 pi^2 cos^2 N^2 (N-1)^2 / sigma^2, written out directly.
double closed_form_oracle(double theta, const SceneConfig& c, Complex beta_bar) {
  const double n = c.bs_antennas;
  const double a = attenuation(c.ris_position, c.carrier_hz);
  const double k = M_PI * M_PI * std::pow(std::cos(theta), 2) * n * n * (n - 1) * (n - 1);
  return 2.0 * c.tx_power_w * c.pilots * a * a * std::norm(beta_bar) * k / c.noise_power_w;
}

}  // namespace

TEST_SUITE("bounds") {
  TEST_CASE("kappa value and symmetry") {
    CHECK(kappa(Angle(0.0), 16) == doctest::Approx(M_PI * M_PI * 256 * 225));
    CHECK(kappa(Angle(0.0), 16) == doctest::Approx(5.685e5).epsilon(1e-3));
    CHECK(kappa(Angle(0.4), 16) == doctest::Approx(kappa(Angle(-0.4), 16)));
    CHECK(kappa(Angle(M_PI / 2), 16) < 1e-20);
  }

  TEST_CASE("closed-form FI matches its defining product") {
    const SceneConfig c = testing::reference_scene();
    const LinkBudget lb = LinkBudget::from(c);
    const MonostaticKernel k = c.kernel();
    std::mt19937_64 rng(5);
    const RisProfile p = testing::random_profile(c.ris_elements, rng);
    for (const double deg : {-60.0, -10.0, 0.0, 20.0, 45.0}) {
      const Angle t = Angle::from_degrees(deg);
      CHECK(fi_closed(t, p, lb, k) ==
            doctest::Approx(closed_form_oracle(t.radians(), c, k(t, p))).epsilon(1e-12));
    }
    // Broadside with a kernel of magnitude M under the specular convention.
    const RisProfile uni = RisProfile::uniform(c.ris_elements);
    const double m = c.ris_elements;
    CHECK(fi_closed(Angle(0.0), uni, lb, MonostaticKernel::specular()) ==
          doctest::Approx(closed_form_oracle(0.0, c, Complex(m, 0.0))).epsilon(1e-12));
    CHECK_THROWS_AS(fi_closed(Angle(M_PI / 2), uni, lb, k), std::domain_error);
  }

  TEST_CASE("closed-form FI is proportional to |beta_bar|^2") {
    const SceneConfig c = testing::reference_scene();
    const LinkBudget lb = LinkBudget::from(c);
    const MonostaticKernel k = c.kernel();
    std::mt19937_64 rng(8);
    const RisProfile p1 = testing::random_profile(c.ris_elements, rng);
    const RisProfile p2 = testing::random_profile(c.ris_elements, rng);
    const Angle t = Angle::from_degrees(-30);
    CHECK(fi_closed(t, p1, lb, k) / fi_closed(t, p2, lb, k) ==
          doctest::Approx(std::norm(k(t, p1)) / std::norm(k(t, p2))).epsilon(1e-10));
  }

  TEST_CASE("exact FI matches a finite difference of the mean") {
    const SceneConfig c = testing::reference_scene();
    const LinkBudget lb = LinkBudget::from(c);
    std::mt19937_64 rng(13);
    const RisProfile p = testing::random_profile(c.ris_elements, rng);
    for (const auto& k : {c.kernel(), MonostaticKernel::specular()}) {
      for (const double deg : {-50.0, -5.0, 19.0, 40.0}) {
        const Angle t = Angle::from_degrees(deg);
        const CVector f = mrt_precoder(t, c.bs_antennas);
        const double h = 1e-6;
        const CVector dg = (composite_gain(Angle(t.radians() + h), p, lb, k, f) -
                            composite_gain(Angle(t.radians() - h), p, lb, k, f)) /
                           (2.0 * h);
        const double oracle = lb.snr_scale() * dg.squaredNorm();
        CHECK(fi_exact(t, p, lb, k) == doctest::Approx(oracle).epsilon(1e-4));
      }
    }
  }

  TEST_CASE("FI scales linearly in power and monotonically with SNR") {
    const SceneConfig c = testing::reference_scene();
    LinkBudget lb = LinkBudget::from(c);
    const MonostaticKernel k = c.kernel();
    const RisProfile uni = RisProfile::uniform(c.ris_elements);
    const Angle t = Angle::from_degrees(10);
    const double e0 = fi_exact(t, uni, lb, k), c0 = fi_closed(t, uni, lb, k);
    LinkBudget hot = lb;
    hot.tx_power_w *= 7.0;
    CHECK(fi_exact(t, uni, hot, k) == doctest::Approx(7.0 * e0).epsilon(1e-12));
    CHECK(fi_closed(t, uni, hot, k) == doctest::Approx(7.0 * c0).epsilon(1e-12));
    LinkBudget longer = lb;
    longer.pilots += 10;
    CHECK(fi_exact(t, uni, longer, k) > e0);
    LinkBudget noisy = lb;
    noisy.noise_power_w *= 2.0;
    CHECK(fi_exact(t, uni, noisy, k) < e0);
  }

  TEST_CASE("a null of the kernel gives vanishing information") {
    SceneConfig c = testing::reference_scene();
    c.ris_elements = 2;
    c.window_count = 1;
    const LinkBudget lb = LinkBudget::from(c);
    CVector omega(2);
    omega << 1.0, -1.0;
    const RisProfile p(omega);
    const MonostaticKernel k = c.kernel();
    CHECK(fi_closed(c.theta_true(), p, lb, k) < 1e-20);
    CHECK(crb(BoundVariant::ClosedForm, c.theta_true(), p, lb, k) ==
          std::numeric_limits<double>::infinity());
  }

  TEST_CASE("CRB and PEB from FI") {
    CHECK(crb_from_fi(4.0) == doctest::Approx(0.25));
    CHECK(std::sqrt(crb_from_fi(4.0)) == doctest::Approx(0.5));
    CHECK(crb_from_fi(0.0) == std::numeric_limits<double>::infinity());
    const SceneConfig c = testing::reference_scene();
    const LinkBudget lb = LinkBudget::from(c);
    const RisProfile uni = RisProfile::uniform(c.ris_elements);
    const Angle t = Angle::from_degrees(-20);
    const double v = crb(BoundVariant::ClosedForm, t, uni, lb, c.kernel());
    CHECK(peb(BoundVariant::ClosedForm, t, uni, lb, c.kernel()) == doctest::Approx(std::sqrt(v)));
    CHECK(v == doctest::Approx(1.0 / fi_closed(t, uni, lb, c.kernel())));
  }

  TEST_CASE("halving the kernel quadruples the closed-form CRB") {
    const SceneConfig c = testing::reference_scene();
    const LinkBudget lb = LinkBudget::from(c);
    const RisProfile uni = RisProfile::uniform(c.ris_elements);
    LinkBudget half = lb;
    half.attenuation *= 0.5;  // same effect as halving |beta_bar| in the closed form
    const Angle t = Angle::from_degrees(5);
    CHECK(crb(BoundVariant::ClosedForm, t, uni, half, c.kernel()) ==
          doctest::Approx(4.0 * crb(BoundVariant::ClosedForm, t, uni, lb, c.kernel())));
  }

  TEST_CASE("angular report is consistent with the pointwise functions") {
    const SceneConfig c = testing::reference_scene();
    const LinkBudget lb = LinkBudget::from(c);
    const RisProfile uni = RisProfile::uniform(c.ris_elements);
    const AngleGrid g = AngleGrid::linspace(Angle::from_degrees(-90), Angle::from_degrees(90), 7);
    const BoundReport r = angular_bounds(g, uni, lb, c.kernel());
    REQUIRE(r.fi_closed.size() == 7);
    CHECK(r.fi_closed.front() == 0.0);
    CHECK(r.fi_closed.back() == 0.0);
    CHECK(r.fi_closed[3] == doctest::Approx(fi_closed(g[3], uni, lb, c.kernel())));
    CHECK(r.fi_exact[2] == doctest::Approx(fi_exact(g[2], uni, lb, c.kernel())));
    CHECK(r.peb_closed[3] == doctest::Approx(std::sqrt(r.crb_closed[3])));
  }

  TEST_CASE("position CRB of a single angle measurement") {
    CHECK(position_crb(2.0, {10.0, 0.0}) == doctest::Approx(50.0));
    CHECK(position_crb(2.0, {6.0, 8.0}) == doctest::Approx(50.0));
    CHECK(position_crb(0.0, {1.0, 0.0}) == std::numeric_limits<double>::infinity());
  }

  TEST_CASE("position PEB map uses range-dependent attenuation") {
    const SceneConfig c = testing::reference_scene();
    PositionGridSpec spec;
    spec.x_min = 10.0;
    spec.x_max = 50.0;
    spec.y_min = -20.0;
    spec.y_max = 20.0;
    spec.nx = 5;
    spec.ny = 4;
    const RisProfile uni = RisProfile::uniform(c.ris_elements);
    const PositionPebMap map = position_peb_map(spec, uni, c, BoundVariant::ClosedForm);
    REQUIRE(map.xs.size() == 5);
    REQUIRE(map.ys.size() == 4);
    const Eigen::Vector2d xi(map.xs[2], map.ys[1]);
    const LinkBudget lb = LinkBudget::from(c).at_position(xi, c.carrier_hz);
    const double fi = fi_closed(bearing(xi), uni, lb, c.kernel());
    CHECK(map.at(2, 1) == doctest::Approx(std::sqrt(position_crb(fi, xi))).epsilon(1e-12));
    const auto best = map.minimum();
    CHECK(best.ix >= 0);
    for (double v : map.peb) CHECK(best.peb <= v);

    PositionGridSpec origin = spec;
    origin.x_min = 0.0;
    origin.y_min = 0.0;
    CHECK_THROWS_AS(position_peb_map(origin, uni, c, BoundVariant::ClosedForm),
                    std::invalid_argument);
  }
}
