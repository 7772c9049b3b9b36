#pragma once

#include <stdexcept>
#include <string>

namespace hillwave {

/// Input rejected before any numerics ran (bad coefficient, empty grid, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of a spectral map, e.g. a w strictly inside a gap.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure did not reach its target (bracket lost, budget exhausted).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hillwave
