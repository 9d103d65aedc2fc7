#include "rispoof/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rispoof {

namespace {
constexpr double kPi = std::numbers::pi;
}

Angle::Angle(double radians) : rad_(radians) {
  if (!std::isfinite(radians)) {
    throw std::invalid_argument("angle must be finite");
  }
}

Angle Angle::from_degrees(double degrees) { return Angle(deg2rad(degrees)); }

double Angle::sin() const { return std::sin(rad_); }

double Angle::cos() const {
  // cos(pi/2) evaluates to 6e-17 in double; snap the endpoints so that
  // kappa and the derivative vanish exactly there.
  if (std::abs(rad_) == kPi / 2) return 0.0;
  return std::cos(rad_);
}

double deg2rad(double degrees) { return degrees / 180.0 * kPi; }
double rad2deg(double radians) { return radians * 180.0 / kPi; }

CVector steering(int length, Angle theta) {
  if (length < 1) {
    throw std::invalid_argument("steering vector length must be positive, got " +
                                std::to_string(length));
  }
  const double phase_step = kPi * theta.sin();
  CVector a(length);
  for (int m = 0; m < length; ++m) {
    a[m] = std::polar(1.0, phase_step * m);
  }
  return a;
}

CVector steering_derivative(int length, Angle theta) {
  CVector a = steering(length, theta);
  const double scale = kPi * theta.cos();
  for (int m = 0; m < length; ++m) {
    a[m] *= Complex(0.0, scale * m);
  }
  return a;
}

Angle bearing(const Eigen::Vector2d& point) {
  if (point.x() == 0.0 && point.y() == 0.0) {
    throw std::invalid_argument("bearing is undefined at the origin");
  }
  return Angle(std::atan2(point.y(), point.x()));
}

AngleGrid AngleGrid::linspace(Angle start, Angle stop, std::size_t count) {
  if (count < 2) throw std::invalid_argument("linspace grid needs at least two points");
  if (!(stop > start)) throw std::invalid_argument("grid stop must exceed start");
  std::vector<double> v(count);
  const double a = start.radians();
  const double span = stop.radians() - a;
  for (std::size_t i = 0; i < count; ++i) {
    v[i] = a + span * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  v.back() = stop.radians();
  return AngleGrid(std::move(v));
}

AngleGrid AngleGrid::stepped(Angle start, Angle stop, Angle step) {
  if (!(step.radians() > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (!(stop > start)) throw std::invalid_argument("grid stop must exceed start");
  const double n = (stop.radians() - start.radians()) / step.radians();
  const auto count = static_cast<std::size_t>(std::floor(n + 0.5)) + 1;
  std::vector<double> v(count);
  // Index-based construction avoids accumulated rounding in long sweeps.
  for (std::size_t i = 0; i < count; ++i) {
    v[i] = start.radians() + step.radians() * static_cast<double>(i);
  }
  v.back() = std::min(v.back(), stop.radians());
  if (count >= 2 && v[count - 1] <= v[count - 2]) v.pop_back();
  return AngleGrid(std::move(v));
}

AngleGrid AngleGrid::interior_degrees(double lo, double hi, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (!(hi > lo)) throw std::invalid_argument("grid stop must exceed start");
  std::vector<double> v;
  for (long i = 1;; ++i) {
    const double d = lo + step * static_cast<double>(i);
    if (d >= hi - 1e-9 * step) break;
    v.push_back(deg2rad(d));
  }
  return AngleGrid(std::move(v));
}

AngleGrid AngleGrid::single(Angle value) { return AngleGrid({value.radians()}); }

AngleGrid AngleGrid::from_values(std::vector<double> radians) {
  for (std::size_t i = 0; i < radians.size(); ++i) {
    if (!std::isfinite(radians[i])) throw std::invalid_argument("grid values must be finite");
    if (i > 0 && !(radians[i] > radians[i - 1])) {
      throw std::invalid_argument("grid values must be strictly increasing");
    }
  }
  return AngleGrid(std::move(radians));
}

AngleGrid AngleGrid::excluding(Angle lo, Angle hi) const {
  std::vector<double> kept;
  kept.reserve(values_.size());
  for (double v : values_) {
    if (v < lo.radians() || v > hi.radians()) kept.push_back(v);
  }
  return AngleGrid(std::move(kept));
}

}  // namespace rispoof
