#pragma once

#include <string>

namespace twosys {

// Command entry points shared by the `twosys` binary and the test suites.
// Exit codes: 0 success, 1 comparison/tolerance failure, 2 config error,
// 3 step underflow, 4 oracle precondition violation, 5 construction
// mismatch in example-quartic.

/// Integrates the configured run; writes the trajectory CSV and the
/// invariant-report JSON.
int cmd_simulate(const std::string& config_path);

/// Integrates two forms from consistent initial data and reports the
/// maximum x- and M-trajectory deviations.
int cmd_compare(const std::string& config_path);

/// Checks a closed-form solution against numerical integration.
int cmd_oracle(const std::string& config_path);

/// Runs the fifth-order quartic example: verifies the hard-coded equations
/// against the constructed two-system field at random states, then
/// integrates and writes <out_prefix>trajectory.csv / <out_prefix>report.json.
int cmd_example_quartic(double epsilon, double t_end, const std::string& out_prefix);

/// Recomputes the invariant report from a previously saved trajectory CSV.
int cmd_invariants(const std::string& config_path);

}  // namespace twosys
