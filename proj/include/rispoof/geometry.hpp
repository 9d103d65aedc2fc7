#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace rispoof {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Azimuth angle stored in radians. Degrees only appear at I/O boundaries.
class Angle {
 public:
  constexpr Angle() = default;
  explicit Angle(double radians);

  static Angle from_degrees(double degrees);

  double radians() const { return rad_; }
  double degrees() const { return rad_ / std::numbers::pi * 180.0; }
  double sin() const;
  double cos() const;

  friend Angle operator+(Angle a, Angle b) { return Angle(a.rad_ + b.rad_); }
  friend Angle operator-(Angle a, Angle b) { return Angle(a.rad_ - b.rad_); }
  friend Angle operator-(Angle a) { return Angle(-a.rad_); }
  friend auto operator<=>(const Angle&, const Angle&) = default;

 private:
  double rad_ = 0.0;
};

double deg2rad(double degrees);
double rad2deg(double radians);

/// Half-wavelength ULA response: entry m is exp(j*pi*m*sin(theta)).
CVector steering(int length, Angle theta);

/// d/dtheta of steering(): entry m is j*pi*m*cos(theta)*exp(j*pi*m*sin(theta)).
CVector steering_derivative(int length, Angle theta);

/// Bearing of a planar point seen from the origin (two-argument arctangent).
Angle bearing(const Eigen::Vector2d& point);

/// Sorted, strictly increasing set of angles used for every sweep.
class AngleGrid {
 public:
  /// Evenly spaced, both endpoints included. count >= 2.
  static AngleGrid linspace(Angle start, Angle stop, std::size_t count);
  /// start, start+step, ... up to and including stop (within half a step).
  static AngleGrid stepped(Angle start, Angle stop, Angle step);
  /// lo + i * step (degrees) for every i >= 1 that stays strictly below hi.
  /// Points are exact multiples of the step in degrees before conversion.
  static AngleGrid interior_degrees(double lo, double hi, double step);
  static AngleGrid single(Angle value);
  static AngleGrid from_values(std::vector<double> radians);

  /// Copy without the angles in the closed interval [lo, hi].
  AngleGrid excluding(Angle lo, Angle hi) const;

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  Angle operator[](std::size_t i) const { return Angle(values_[i]); }
  const std::vector<double>& radians() const { return values_; }
  Angle front() const { return Angle(values_.front()); }
  Angle back() const { return Angle(values_.back()); }

 private:
  explicit AngleGrid(std::vector<double> values) : values_(std::move(values)) {}
  std::vector<double> values_;
};

}  // namespace rispoof
