#pragma once

#include <stdexcept>
#include <string>

namespace ef1po {

/// Malformed input: bad shapes, out-of-range indices, non-positive costs.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An exhaustive oracle or enumeration would exceed its configured budget.
/// Oracles raise this instead of degrading to sampling.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A proven invariant did not hold at runtime. Signals an implementation
/// bug or a violated precondition, never a recoverable condition.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace ef1po
