#pragma once

#include <stdexcept>
#include <string>

namespace qhahn {

// Argument outside the mathematical domain of a formula (support, q range).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Parameters violate a constraint required for a stochastic interpretation.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A resource guard (state-space size, iteration cap) was hit.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qhahn
