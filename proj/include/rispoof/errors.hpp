#pragma once

#include <stdexcept>
#include <string>

namespace rispoof {

/// Scenario text that does not match the schema (unknown key, bad type, ...).
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A spoofing problem whose feasibility assumptions do not hold
/// (M < 2K, rank-deficient nulling kernels, decoy inside the window).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite intermediate or a factorization that broke down.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rispoof
