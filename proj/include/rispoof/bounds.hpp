#pragma once

#include <vector>

#include "rispoof/channel.hpp"
#include "rispoof/geometry.hpp"
#include "rispoof/ris_kernel.hpp"

namespace rispoof {

/// Scalars entering the Fisher information: 2 P T / sigma^2 and a_RIS.
struct LinkBudget {
  int antennas = 16;
  int pilots = 50;
  double tx_power_w = 0.1;
  double noise_power_w = 1e-11;
  double attenuation = 1.0;

  static LinkBudget from(const SceneConfig& config);
  /// Same budget with a_RIS evaluated at another range.
  LinkBudget at_position(const Eigen::Vector2d& point, double carrier_hz) const;

  double snr_scale() const { return 2.0 * tx_power_w * pilots / noise_power_w; }
};

/// pi^2 cos^2(theta) N^2 (N-1)^2.
double kappa(Angle theta, int antennas);

/// Composite gain g(theta) = a_RIS beta_bar(theta) a_N(theta) a_N(theta)^H f for a
/// fixed transmit vector f.
CVector composite_gain(Angle theta, const RisProfile& profile, const LinkBudget& budget,
                       const MonostaticKernel& kernel, const CVector& precoder);

/// Central-difference step for d beta_bar / d theta inside fi_exact.
inline constexpr double kKernelDerivativeStep = 1e-5;

/// (2PT/sigma^2) ||dg/dtheta||^2 with the full product rule: analytic steering
/// derivatives, a central difference for the kernel. The precoder is MRT toward
/// theta and is held fixed while differentiating.
double fi_exact(Angle theta, const RisProfile& profile, const LinkBudget& budget,
                const MonostaticKernel& kernel);

/// Flat-kernel closed form 2PT a^2 |beta_bar|^2 kappa(theta) / sigma^2.
/// Throws std::domain_error at |theta| = pi/2.
double fi_closed(Angle theta, const RisProfile& profile, const LinkBudget& budget,
                 const MonostaticKernel& kernel);

enum class BoundVariant { Exact, ClosedForm };

double fisher_information(BoundVariant variant, Angle theta, const RisProfile& profile,
                          const LinkBudget& budget, const MonostaticKernel& kernel);

/// 1/fi, or +inf when fi == 0.
double crb_from_fi(double fi);

double crb(BoundVariant variant, Angle theta, const RisProfile& profile,
           const LinkBudget& budget, const MonostaticKernel& kernel);

/// sqrt(CRB).
double peb(BoundVariant variant, Angle theta, const RisProfile& profile,
           const LinkBudget& budget, const MonostaticKernel& kernel);

struct BoundReport {
  AngleGrid grid;
  std::vector<double> fi_exact;
  std::vector<double> fi_closed;
  std::vector<double> crb_exact;
  std::vector<double> crb_closed;
  std::vector<double> peb_exact;
  std::vector<double> peb_closed;
  std::vector<double> kappa;
};

/// Both variants over an angle grid. Closed-form values at +-90 deg are 0.
BoundReport angular_bounds(const AngleGrid& grid, const RisProfile& profile,
                           const LinkBudget& budget, const MonostaticKernel& kernel);

/// trace(pinv(T^T J T)) for T = d theta / d xi at the point xi. The position
/// FIM of a single angle measurement is rank one, so this is the
/// cross-range error; r^2 / J. Returns +inf when J == 0.
double position_crb(double angular_fi, const Eigen::Vector2d& point);

struct PositionGridSpec {
  double x_min = 0.0;
  double x_max = 100.0;
  double y_min = -80.0;
  double y_max = 80.0;
  int nx = 200;
  int ny = 200;

  std::vector<double> xs() const;
  std::vector<double> ys() const;
};

struct PositionPebMap {
  PositionGridSpec spec;
  std::vector<double> xs;
  std::vector<double> ys;
  /// Row-major over (y, x): peb[iy * nx + ix]. +inf where the FI vanishes.
  std::vector<double> peb;

  double at(int ix, int iy) const { return peb[static_cast<std::size_t>(iy) * xs.size() + ix]; }

  struct Cell {
    int ix = -1;
    int iy = -1;
    double x = 0.0;
    double y = 0.0;
    double peb = 0.0;
    Angle bearing;
  };
  /// Smallest finite PEB cell; ix = -1 if every cell is infinite.
  Cell minimum() const;
};

/// PEB over a Cartesian grid: angular FI at the cell bearing with a_RIS taken at
/// the cell range, mapped to position through the rank-one change of variables.
/// Throws std::invalid_argument if a grid point is the origin.
PositionPebMap position_peb_map(const PositionGridSpec& spec, const RisProfile& profile,
                                const SceneConfig& config, BoundVariant variant);

}  // namespace rispoof
