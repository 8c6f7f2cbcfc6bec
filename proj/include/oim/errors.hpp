#pragma once

#include <stdexcept>
#include <string>

namespace oim {

/// Invalid arguments: dimension mismatch, out-of-range parameters, broken invariants.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed graph document.
class GraphFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine failed (non-finite state, eigensolver did not converge,
/// internal identity violated).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Too few admissible bins or samples to estimate a quantity.
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The stability threshold is undefined because no configuration is suboptimal.
class UndefinedThresholdError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace oim
