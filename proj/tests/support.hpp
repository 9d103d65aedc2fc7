#pragma once

#include <cmath>
#include <random>

#include "rispoof/channel.hpp"
#include "rispoof/ris_kernel.hpp"
#include "rispoof/scenario.hpp"

namespace rispoof::testing {

inline ScenarioFile reference_scenario() {
  return load_scenario(RISPOOF_SOURCE_DIR "/scenarios/reference.toml");
}

inline SceneConfig reference_scene() { return reference_scenario().scene_config(); }

inline RisProfile random_profile(int elements, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> phase(-M_PI, M_PI);
  Eigen::VectorXd p(elements);
  for (int m = 0; m < elements; ++m) p[m] = phase(rng);
  return RisProfile::from_phases(p);
}

// Independent re-derivations used as oracles; deliberately not shared with the library.
namespace oracle {

inline CVector steer(int n, double theta) {
  CVector a(n);
  for (int i = 0; i < n; ++i) a[i] = std::exp(Complex(0.0, M_PI * i * std::sin(theta)));
  return a;
}

// sum_m conj(exp(j pi m (sin(in) - sin(out)))) * omega_m
inline Complex beta(double out, double in, const CVector& omega) {
  Complex acc = 0.0;
  for (int m = 0; m < omega.size(); ++m) {
    acc += std::exp(Complex(0.0, -M_PI * m * (std::sin(in) - std::sin(out)))) * omega[m];
  }
  return acc;
}

}  // namespace oracle

}  // namespace rispoof::testing
