#include "rispoof/ris_kernel.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rispoof/errors.hpp"

namespace rispoof {

RisProfile::RisProfile(CVector omega) : omega_(std::move(omega)) {
  if (omega_.size() == 0) throw std::invalid_argument("RIS profile must not be empty");
  for (Eigen::Index m = 0; m < omega_.size(); ++m) {
    const double mag = std::abs(omega_[m]);
    if (!std::isfinite(mag) || std::abs(mag - 1.0) > 1e-9) {
      std::ostringstream msg;
      msg << "RIS profile entry " << m << " has modulus " << mag << ", expected 1";
      throw std::invalid_argument(msg.str());
    }
  }
}

RisProfile RisProfile::uniform(int elements) {
  if (elements < 1) throw std::invalid_argument("RIS needs at least one element");
  return RisProfile(CVector::Ones(elements));
}

RisProfile RisProfile::from_phases(const Eigen::VectorXd& phases) {
  CVector omega(phases.size());
  for (Eigen::Index m = 0; m < phases.size(); ++m) omega[m] = std::polar(1.0, phases[m]);
  return RisProfile(std::move(omega));
}

Eigen::VectorXd RisProfile::phases() const {
  Eigen::VectorXd out(omega_.size());
  for (Eigen::Index m = 0; m < omega_.size(); ++m) out[m] = std::arg(omega_[m]);
  return out;
}

CVector kernel_vector(Angle out_angle, Angle in_angle, int elements) {
  if (elements < 1) throw std::invalid_argument("RIS needs at least one element");
  const double step = std::numbers::pi * (in_angle.sin() - out_angle.sin());
  CVector v(elements);
  for (int m = 0; m < elements; ++m) v[m] = std::polar(1.0, step * m);
  return v;
}

Complex beta(Angle out_angle, Angle in_angle, const RisProfile& profile) {
  return kernel_vector(out_angle, in_angle, profile.size()).dot(profile.values());
}

MonostaticKernel MonostaticKernel::specular() {
  return MonostaticKernel(KernelConvention::SpecularPlusPi, std::nullopt);
}

MonostaticKernel MonostaticKernel::fixed_incidence(Angle theta_true) {
  return MonostaticKernel(KernelConvention::FixedIncidence, theta_true);
}

CVector MonostaticKernel::kernel(Angle theta, int elements) const {
  switch (convention_) {
    case KernelConvention::SpecularPlusPi:
      return kernel_vector(theta + Angle(std::numbers::pi), theta, elements);
    case KernelConvention::FixedIncidence:
      return kernel_vector(theta, *incidence_, elements);
  }
  throw std::logic_error("unknown kernel convention");
}

Complex MonostaticKernel::operator()(Angle theta, const RisProfile& profile) const {
  return kernel(theta, profile.size()).dot(profile.values());
}

Complex beta_bar(Angle theta, const RisProfile& profile, KernelConvention convention,
                 std::optional<Angle> theta_true) {
  if (convention == KernelConvention::FixedIncidence) {
    if (!theta_true) {
      throw std::invalid_argument("fixed-incidence kernel needs the true angle");
    }
    return MonostaticKernel::fixed_incidence(*theta_true)(theta, profile);
  }
  return MonostaticKernel::specular()(theta, profile);
}

NullingWindow NullingWindow::uniform(Angle center, Angle half_width, int count) {
  if (count < 1) throw std::invalid_argument("nulling window needs at least one angle");
  if (half_width.radians() < 0.0) throw std::invalid_argument("window half-width must be >= 0");
  if (count > 1 && half_width.radians() == 0.0) {
    throw std::invalid_argument("zero-width window cannot hold distinct nulling angles");
  }
  return NullingWindow{center, half_width, count};
}

std::vector<Angle> NullingWindow::angles() const {
  std::vector<Angle> out;
  out.reserve(count);
  if (count == 1) {
    out.push_back(center);
    return out;
  }
  const double lo = lower().radians();
  const double span = 2.0 * half_width.radians();
  for (int k = 0; k < count; ++k) {
    out.emplace_back(lo + span * k / (count - 1));
  }
  return out;
}

bool NullingWindow::contains(Angle theta) const {
  return std::abs(theta.radians() - center.radians()) <= half_width.radians();
}

KernelBasis::KernelBasis(CVector decoy, CMatrix nulling)
    : w_(std::move(decoy)), v_(std::move(nulling)) {
  const auto m = w_.size();
  const auto k = v_.cols();
  if (m < 1) throw std::invalid_argument("decoy kernel must not be empty");
  if (k > 0 && v_.rows() != m) {
    throw std::invalid_argument("nulling kernels and decoy kernel differ in length");
  }
  if (m < 2 * k) {
    std::ostringstream msg;
    msg << "feasibility condition M >= 2K violated (M = " << m << ", K = " << k << ")";
    throw InfeasibleError(msg.str());
  }

  if (k == 0) {
    u_ = CMatrix(m, 0);
    sigma_ = Eigen::VectorXd(0);
  } else {
    Eigen::JacobiSVD<CMatrix> svd(v_, Eigen::ComputeThinU);
    sigma_ = svd.singularValues();
    u_ = svd.matrixU();
    if (!(sigma_[k - 1] > 0.0) || condition_number() > kMaxCondition) {
      std::ostringstream msg;
      msg << "rank(V) = K violated: nulling kernels are aliased or repeated (cond(V) = "
          << condition_number() << ")";
      throw InfeasibleError(msg.str());
    }
  }

  p_s_ = CMatrix::Identity(m, m);
  if (k > 0) p_s_.noalias() -= u_ * u_.adjoint();

  if (project(w_).norm() <= 1e-9 * w_.norm()) {
    throw InfeasibleError("decoy kernel lies in span(V): w not in span(V) violated");
  }
}

double KernelBasis::condition_number() const {
  if (sigma_.size() == 0) return 1.0;
  const double smallest = sigma_[sigma_.size() - 1];
  if (smallest <= 0.0) return std::numeric_limits<double>::infinity();
  return sigma_[0] / smallest;
}

CVector KernelBasis::project(const CVector& x) const {
  CVector out = x;
  CVector scratch;
  project_in_place(out, scratch);
  return out;
}

void KernelBasis::project_in_place(CVector& x, CVector& scratch) const {
  if (u_.cols() == 0) return;
  scratch.noalias() = u_.adjoint() * x;
  x.noalias() -= u_ * scratch;
}

double KernelBasis::residual(const CVector& x) const {
  if (v_.cols() == 0) return 0.0;
  return (v_.adjoint() * x).squaredNorm();
}

KernelBasis build_basis(const std::vector<Angle>& null_angles, Angle theta_fake,
                        Angle theta_true, int elements) {
  if (elements < 1) throw std::invalid_argument("RIS needs at least one element");
  const auto k = static_cast<Eigen::Index>(null_angles.size());
  if (elements < 2 * k) {
    std::ostringstream msg;
    msg << "feasibility condition M >= 2K violated (M = " << elements << ", K = " << k << ")";
    throw InfeasibleError(msg.str());
  }
  CMatrix v(elements, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    v.col(i) = kernel_vector(null_angles[i], theta_true, elements);
  }
  return KernelBasis(kernel_vector(theta_fake, theta_true, elements), std::move(v));
}

KernelBasis build_basis(const NullingWindow& window, Angle theta_fake, Angle theta_true,
                        int elements) {
  if (window.contains(theta_fake)) {
    std::ostringstream msg;
    msg << "decoy angle " << theta_fake.degrees()
        << " deg lies inside the nulling window: w not in span(V) violated";
    throw InfeasibleError(msg.str());
  }
  return build_basis(window.angles(), theta_fake, theta_true, elements);
}

}  // namespace rispoof
