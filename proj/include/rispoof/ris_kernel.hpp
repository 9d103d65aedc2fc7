#pragma once

#include <optional>
#include <vector>

#include "rispoof/geometry.hpp"

namespace rispoof {

/// Unit-modulus RIS phase profile (the design variable).
class RisProfile {
 public:
  /// Throws std::invalid_argument unless every |entry| is within 1e-9 of 1.
  explicit RisProfile(CVector omega);

  static RisProfile uniform(int elements);
  static RisProfile from_phases(const Eigen::VectorXd& phases);

  int size() const { return static_cast<int>(omega_.size()); }
  const CVector& values() const { return omega_; }
  Eigen::VectorXd phases() const;

 private:
  CVector omega_;
};

/// Per-element kernel conj(a_M(out)) .* a_M(in); entry m is
/// exp(j*pi*m*(sin(in) - sin(out))).
CVector kernel_vector(Angle out_angle, Angle in_angle, int elements);

/// RIS reflection response kernel_vector(out, in)^H * omega.
Complex beta(Angle out_angle, Angle in_angle, const RisProfile& profile);

enum class KernelConvention {
  /// beta(theta + pi, theta): incidence and departure both follow theta.
  SpecularPlusPi,
  /// beta(theta, theta_true): incidence pinned to the true direction.
  FixedIncidence,
};

/// Monostatic kernel beta_bar(theta; omega) under a declared convention.
class MonostaticKernel {
 public:
  static MonostaticKernel specular();
  static MonostaticKernel fixed_incidence(Angle theta_true);

  KernelConvention convention() const { return convention_; }
  std::optional<Angle> incidence() const { return incidence_; }

  /// Kernel vector whose inner product with omega gives beta_bar(theta).
  CVector kernel(Angle theta, int elements) const;
  Complex operator()(Angle theta, const RisProfile& profile) const;

 private:
  MonostaticKernel(KernelConvention convention, std::optional<Angle> incidence)
      : convention_(convention), incidence_(incidence) {}

  KernelConvention convention_;
  std::optional<Angle> incidence_;
};

/// Convenience form taking the convention enum directly. FixedIncidence
/// requires theta_true and throws std::invalid_argument without it.
Complex beta_bar(Angle theta, const RisProfile& profile, KernelConvention convention,
                 std::optional<Angle> theta_true = std::nullopt);

/// K nulling directions placed uniformly over [center - half_width, center + half_width].
struct NullingWindow {
  Angle center;
  Angle half_width;
  int count = 0;

  static NullingWindow uniform(Angle center, Angle half_width, int count);

  std::vector<Angle> angles() const;
  bool contains(Angle theta) const;
  Angle lower() const { return center - half_width; }
  Angle upper() const { return center + half_width; }
};

/// Decoy kernel w, nulling kernels V, and the orthogonal projector onto
/// null(V^H). Immutable once built.
class KernelBasis {
 public:
  /// Condition number of V above which the nulling samples count as aliased.
  static constexpr double kMaxCondition = 1e12;

  /// Validates M >= 2K, rank(V) = K and w outside span(V). V may have zero
  /// columns, in which case the projector is the identity.
  KernelBasis(CVector decoy, CMatrix nulling);

  int elements() const { return static_cast<int>(w_.size()); }
  int constraints() const { return static_cast<int>(v_.cols()); }

  const CVector& decoy() const { return w_; }
  const CMatrix& nulling() const { return v_; }
  /// Orthonormal basis of span(V) (thin SVD left vectors).
  const CMatrix& range_basis() const { return u_; }
  const Eigen::VectorXd& singular_values() const { return sigma_; }
  double condition_number() const;

  /// Dense P_S = I - V (V^H V)^{-1} V^H.
  const CMatrix& projector() const { return p_s_; }

  /// P_S x in O(MK) through the orthonormal basis.
  CVector project(const CVector& x) const;
  void project_in_place(CVector& x, CVector& scratch) const;

  /// Nulling residual ||V^H x||^2.
  double residual(const CVector& x) const;

 private:
  CVector w_;
  CMatrix v_;
  CMatrix u_;
  Eigen::VectorXd sigma_;
  CMatrix p_s_;
};

/// Assemble w = kernel_vector(theta_fake, theta_true) and V from the window.
/// Throws InfeasibleError naming the violated condition.
KernelBasis build_basis(const NullingWindow& window, Angle theta_fake, Angle theta_true,
                        int elements);

/// Same construction for an arbitrary list of nulling angles.
KernelBasis build_basis(const std::vector<Angle>& null_angles, Angle theta_fake,
                        Angle theta_true, int elements);

}  // namespace rispoof
