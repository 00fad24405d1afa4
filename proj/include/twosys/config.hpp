#pragma once

#include "twosys/integrate.hpp"
#include "twosys/model.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace twosys {

/// Parsed run configuration. The file format is flat key/value lines under
/// one level of [section] headers; '#' starts a comment. See README for the
/// schema.
struct RunConfig {
  enum class ModelKind { Quartic, PolynomialFile };

  // [model]
  ModelKind model_kind = ModelKind::Quartic;
  double epsilon = 0.1;
  std::string model_file;
  int n = 1;

  // [run]
  std::string form = "two";
  IntegratorConfig integ;

  // [initial]
  std::vector<double> x0;
  std::vector<double> m0;  // upper triangle (n(2n+1) values) or full matrix (4n^2)
  std::vector<std::vector<double>> ys0;
  std::vector<std::vector<double>> zs0;

  // [output]
  std::string trajectory_path = "trajectory.csv";
  std::string report_path = "report.json";

  // [compare]
  std::string form_b;
  int checkpoints = 100;
  double compare_tol = 1e-8;

  // [oracle]
  std::string oracle_case;
  std::vector<double> h_coeffs;  // H(I) polynomial, ascending powers
  double oracle_tol = 1e-8;

  // [tolerances]
  double sp_tol = 1e-9;
  double signature_tol = 1e-9;
  double rank_tol = 1e-10;

  bool operator==(const RunConfig&) const;
};

/// Parses a configuration; throws ConfigError on unknown sections or keys,
/// malformed values, or violated invariants (e.g. an asymmetric full M).
RunConfig parse_config(std::istream& is);
RunConfig parse_config_file(const std::string& path);

/// Canonical serialization; parse(serialize(c)) == c.
std::string serialize_config(const RunConfig& c);

/// Polynomial model text format: one `coeff e1 e2 ... e2n` line per term,
/// '#' comments.
std::vector<MonomialTerm> parse_polynomial_terms(std::istream& is, int expected_dim);

/// Builds the configured Hamiltonian (built-in quartic or polynomial file).
HamiltonianModel model_from_config(const RunConfig& c);

/// Initial moment matrix from m0 / ys0 / zs0, validated symmetric.
/// Returns a zero matrix when nothing was specified.
Eigen::MatrixXd initial_moment_matrix(const RunConfig& c);

}  // namespace twosys
