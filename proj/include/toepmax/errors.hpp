#pragma once

#include <stdexcept>
#include <string>

namespace toepmax {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed arguments: bad pattern bounds, non-finite data, class mismatch, ...
struct InvalidInput : Error {
  using Error::Error;
};

// The instance admits no positive semidefinite completion at all.
struct InfeasibleInstance : Error {
  using Error::Error;
};

// A solver that needs a strictly feasible instance got a boundary or
// infeasible one.
struct NotStrictlyFeasible : Error {
  using Error::Error;
};

// Iteration budget exhausted without reaching the requested tolerance.
struct MaxIterations : Error {
  using Error::Error;
};

// Combinatorial search exceeded its node budget.
struct BudgetExceeded : Error {
  using Error::Error;
};

// A matrix failed a structural postcondition (Toeplitz check, inverse
// template, support condition).
struct StructureViolation : Error {
  using Error::Error;
};

}  // namespace toepmax
