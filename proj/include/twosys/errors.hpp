#pragma once

#include <stdexcept>

namespace twosys {

/// Adaptive step size fell below the representable floor for the requested
/// time span.
struct StepUnderflowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A closed-form solution was requested at a point that violates its
/// preconditions.
struct OraclePreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Missing, unreadable, or inconsistent run configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace twosys
