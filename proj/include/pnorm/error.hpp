#pragma once

#include <stdexcept>
#include <string>

namespace pnorm {

/// Malformed or out-of-contract input (bad dimensions, p <= 0, asymmetric matrix, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical certification did not hold: a verdict mismatch, a singular
/// system, a root that failed its residual check.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pnorm
