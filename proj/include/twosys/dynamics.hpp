#pragma once

#include "twosys/model.hpp"

#include <Eigen/Dense>

#include <vector>

namespace twosys {

/// Phase point of the two-system. Stored canonically as the moment matrix
/// M = -J phi; phi = J M is derived. M is symmetric exactly when
/// phi is in sp(2n, R).
struct TwoState {
  Eigen::VectorXd x;
  Eigen::MatrixXd m;

  Eigen::MatrixXd phi() const;
  static TwoState from_phi(Eigen::VectorXd x, const Eigen::MatrixXd& phi);
};

/// State of the vector form (and of the naive union): base point x plus one
/// variation vector y, both of length 2n.
struct VectorFormState {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
};

/// State of the multivector form in signature (m_plus, m_minus):
/// base point x plus m_plus vectors y_i and m_minus vectors z_j.
struct MultiVectorState {
  Eigen::VectorXd x;
  std::vector<Eigen::VectorXd> ys;
  std::vector<Eigen::VectorXd> zs;
};

/// Relative sp-membership band for two-system inputs.
inline constexpr double kSpResidualTol = 1e-9;

/// x' = J H'(x).
Eigen::VectorXd base_rhs(const HamiltonianModel& model, const Eigen::VectorXd& x);

/// y' = J H''(x) y, the system in variations along x.
Eigen::VectorXd variational_rhs(const HamiltonianModel& model, const Eigen::VectorXd& x,
                                const Eigen::VectorXd& y);

/// Canonical flow of H(x) + y^t H''(x) y / 2 on R^{4n}:
///   x' = J (H' + third_contract(x, y y^t) / 2),  y' = J H''(x) y.
VectorFormState vector_form_rhs(const HamiltonianModel& model, const VectorFormState& s);

/// Lax matrix A(x) = H''(x) J; lies in sp(2n, R) for every x.
Eigen::MatrixXd lax_matrix(const HamiltonianModel& model, const Eigen::VectorXd& x);

/// Moment evolution M' = J H''(x) M + M H''(x) J^t for any square M.
/// Preserves symmetry and antisymmetry separately.
Eigen::MatrixXd moment_rhs(const HamiltonianModel& model, const Eigen::VectorXd& x,
                           const Eigen::MatrixXd& m);

/// Two-system right-hand side:
///   x' = J (H' + third_contract(x, M_s) / 2),  M' = moment_rhs(x, M),
/// equivalently phi' = [A(x), phi]. Emits a warning (and proceeds) when the
/// sp-membership residual of phi = J M exceeds the tolerance.
TwoState two_system_rhs(const HamiltonianModel& model, const TwoState& s);

/// Same field without the sp-membership check; used for deliberately
/// asymmetric M.
TwoState two_system_rhs_general(const HamiltonianModel& model, const TwoState& s);

/// Canonical flow of H(x) + sum F(x, y_i) - sum F(x, z_j) under J + J + ...:
/// the x-equation couples all variation vectors through
/// third_contract(x, sum y y^t - sum z z^t).
MultiVectorState multivector_rhs(const HamiltonianModel& model, const MultiVectorState& s);

/// Base system and system in variations glued with no correction term.
VectorFormState naive_union_rhs(const HamiltonianModel& model, const VectorFormState& s);

/// Frobenius norm of the antisymmetric part of the Jacobian of
/// (J + J)^{-1} * naive_union_rhs at s, by central differences. Zero iff the
/// glued field is locally Hamiltonian with respect to J + J.
double hamiltonicity_defect(const HamiltonianModel& model, const VectorFormState& s);

}  // namespace twosys
