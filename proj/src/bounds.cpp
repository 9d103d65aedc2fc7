#include "rispoof/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rispoof {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

LinkBudget LinkBudget::from(const SceneConfig& config) {
  LinkBudget b;
  b.antennas = config.bs_antennas;
  b.pilots = config.pilots;
  b.tx_power_w = config.tx_power_w;
  b.noise_power_w = config.noise_power_w;
  b.attenuation = rispoof::attenuation(config.ris_position, config.carrier_hz);
  return b;
}

LinkBudget LinkBudget::at_position(const Eigen::Vector2d& point, double carrier_hz) const {
  LinkBudget b = *this;
  b.attenuation = rispoof::attenuation(point, carrier_hz);
  return b;
}

double kappa(Angle theta, int antennas) {
  const double n = antennas;
  const double c = theta.cos();
  return std::numbers::pi * std::numbers::pi * c * c * n * n * (n - 1.0) * (n - 1.0);
}

CVector composite_gain(Angle theta, const RisProfile& profile, const LinkBudget& budget,
                       const MonostaticKernel& kernel, const CVector& precoder) {
  const CVector a = steering(budget.antennas, theta);
  const Complex v = a.dot(precoder);
  return (budget.attenuation * kernel(theta, profile) * v) * a;
}

double fi_exact(Angle theta, const RisProfile& profile, const LinkBudget& budget,
                const MonostaticKernel& kernel) {
  const int n = budget.antennas;
  const CVector f = mrt_precoder(theta, n);
  const CVector a = steering(n, theta);
  const CVector da = steering_derivative(n, theta);
  const Complex v = a.dot(f);
  const Complex dv = da.dot(f);

  const double h = kKernelDerivativeStep;
  const Complex b = kernel(theta, profile);
  const Complex db =
      (kernel(Angle(theta.radians() + h), profile) - kernel(Angle(theta.radians() - h), profile)) /
      (2.0 * h);

  const CVector dg = budget.attenuation * ((db * v) * a + b * (v * da + dv * a));
  return budget.snr_scale() * dg.squaredNorm();
}

double fi_closed(Angle theta, const RisProfile& profile, const LinkBudget& budget,
                 const MonostaticKernel& kernel) {
  if (theta.cos() == 0.0) {
    throw std::domain_error("closed-form FI needs cos(theta) != 0");
  }
  const double b = std::abs(kernel(theta, profile));
  const double a = budget.attenuation;
  return budget.snr_scale() * a * a * b * b * kappa(theta, budget.antennas);
}

double fisher_information(BoundVariant variant, Angle theta, const RisProfile& profile,
                          const LinkBudget& budget, const MonostaticKernel& kernel) {
  return variant == BoundVariant::Exact ? fi_exact(theta, profile, budget, kernel)
                                        : fi_closed(theta, profile, budget, kernel);
}

double crb_from_fi(double fi) {
  if (fi < 0.0 || std::isnan(fi)) throw std::domain_error("Fisher information must be >= 0");
  return fi == 0.0 ? kInf : 1.0 / fi;
}

double crb(BoundVariant variant, Angle theta, const RisProfile& profile,
           const LinkBudget& budget, const MonostaticKernel& kernel) {
  return crb_from_fi(fisher_information(variant, theta, profile, budget, kernel));
}

double peb(BoundVariant variant, Angle theta, const RisProfile& profile,
           const LinkBudget& budget, const MonostaticKernel& kernel) {
  return std::sqrt(crb(variant, theta, profile, budget, kernel));
}

BoundReport angular_bounds(const AngleGrid& grid, const RisProfile& profile,
                           const LinkBudget& budget, const MonostaticKernel& kernel) {
  BoundReport r{grid, {}, {}, {}, {}, {}, {}, {}};
  const std::size_t n = grid.size();
  for (auto* v : {&r.fi_exact, &r.fi_closed, &r.crb_exact, &r.crb_closed, &r.peb_exact,
                  &r.peb_closed, &r.kappa}) {
    v->resize(n);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Angle theta = grid[i];
    r.kappa[i] = kappa(theta, budget.antennas);
    r.fi_exact[i] = fi_exact(theta, profile, budget, kernel);
    r.fi_closed[i] = theta.cos() == 0.0 ? 0.0 : fi_closed(theta, profile, budget, kernel);
    r.crb_exact[i] = crb_from_fi(r.fi_exact[i]);
    r.crb_closed[i] = crb_from_fi(r.fi_closed[i]);
    r.peb_exact[i] = std::sqrt(r.crb_exact[i]);
    r.peb_closed[i] = std::sqrt(r.crb_closed[i]);
  }
  return r;
}

double position_crb(double angular_fi, const Eigen::Vector2d& point) {
  const double r2 = point.squaredNorm();
  if (r2 == 0.0) throw std::invalid_argument("position CRB undefined at the origin");
  if (angular_fi <= 0.0) return kInf;
  // T = [-y, x] / r^2, J_xi = J T^T T; the nonzero eigenvalue is J / r^2.
  return r2 / angular_fi;
}

namespace {

std::vector<double> axis(double lo, double hi, int count) {
  if (count < 1) throw std::invalid_argument("position grid needs at least one cell per axis");
  std::vector<double> v(count);
  if (count == 1) {
    v[0] = lo;
    return v;
  }
  for (int i = 0; i < count; ++i) v[i] = lo + (hi - lo) * i / (count - 1);
  v.back() = hi;
  return v;
}

}  // namespace

std::vector<double> PositionGridSpec::xs() const { return axis(x_min, x_max, nx); }
std::vector<double> PositionGridSpec::ys() const { return axis(y_min, y_max, ny); }

PositionPebMap::Cell PositionPebMap::minimum() const {
  Cell best;
  best.peb = kInf;
  for (std::size_t iy = 0; iy < ys.size(); ++iy) {
    for (std::size_t ix = 0; ix < xs.size(); ++ix) {
      const double value = peb[iy * xs.size() + ix];
      if (std::isfinite(value) && value < best.peb) {
        best.ix = static_cast<int>(ix);
        best.iy = static_cast<int>(iy);
        best.x = xs[ix];
        best.y = ys[iy];
        best.peb = value;
      }
    }
  }
  if (best.ix >= 0) best.bearing = bearing(Eigen::Vector2d(best.x, best.y));
  return best;
}

PositionPebMap position_peb_map(const PositionGridSpec& spec, const RisProfile& profile,
                                const SceneConfig& config, BoundVariant variant) {
  PositionPebMap map;
  map.spec = spec;
  map.xs = spec.xs();
  map.ys = spec.ys();
  map.peb.assign(map.xs.size() * map.ys.size(), kInf);

  const LinkBudget base = LinkBudget::from(config);
  const MonostaticKernel kernel = config.kernel();
  for (std::size_t iy = 0; iy < map.ys.size(); ++iy) {
    for (std::size_t ix = 0; ix < map.xs.size(); ++ix) {
      const Eigen::Vector2d xi(map.xs[ix], map.ys[iy]);
      if (xi.isZero(0.0)) {
        throw std::invalid_argument("position grid must exclude the origin");
      }
      const Angle theta = bearing(xi);
      const LinkBudget budget = base.at_position(xi, config.carrier_hz);
      double fi = 0.0;
      if (variant == BoundVariant::Exact) {
        fi = fi_exact(theta, profile, budget, kernel);
      } else if (theta.cos() != 0.0) {
        fi = fi_closed(theta, profile, budget, kernel);
      }
      map.peb[iy * map.xs.size() + ix] = std::sqrt(position_crb(fi, xi));
    }
  }
  return map;
}

}  // namespace rispoof
