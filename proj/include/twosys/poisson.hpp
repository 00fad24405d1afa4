#pragma once

#include "twosys/dynamics.hpp"
#include "twosys/model.hpp"

#include <Eigen/Dense>

#include <vector>

namespace twosys {

// ---------------------------------------------------------------------------
// Moment chart
//
// The two-system phase space R^{2n} x sp(2n, R) is charted by the 2n base
// coordinates together with the n(2n+1) independent entries m_ij (i <= j,
// row-major) of the symmetric matrix M = -J phi. For n = 1 the moment order
// is (alpha, beta, gamma) = (M_11, M_12, M_22).
// ---------------------------------------------------------------------------

/// Number of independent moment coordinates, n(2n+1).
int moment_count(int n);

/// Upper triangle of a symmetric matrix, row-major.
Eigen::VectorXd moments_from_matrix(const Eigen::MatrixXd& m);

/// Symmetric matrix from its upper-triangle coordinates.
Eigen::MatrixXd matrix_from_moments(int n, const Eigen::VectorXd& moments);

/// Entry-wise gradient of det(phi): (phi^{-1})^t det(phi).
/// Throws for singular phi.
Eigen::MatrixXd grad_phi_det(const Eigen::MatrixXd& phi);

/// Entry-wise gradient of phi -> tr(phi A): A^t.
Eigen::MatrixXd grad_phi_trace(const Eigen::MatrixXd& a);

/// Poisson tensor of the two-system bracket in the (x, moments) chart.
/// The x-block is J, the x-M cross-blocks vanish, and the M-block carries
/// the linear bracket {m_u, m_v} = 2 tr(phi^t [P_u, P_v]) with the
/// sp-valued coordinate gradients P_u = J (E_ij + E_ji)/2. Exactly
/// antisymmetric by construction.
Eigen::MatrixXd omega_matrix(const Eigen::VectorXd& x, const Eigen::VectorXd& moments);

/// Extended energy H(x) + tr(H''(x) M)/2; the conserved Hamiltonian of the
/// two-system.
double extended_energy(const HamiltonianModel& model, const TwoState& s);

/// Two-system field assembled through the bracket: Omega applied to the
/// chart gradient of the extended energy. Agrees with two_system_rhs to
/// roundoff.
TwoState bracket_rhs(const HamiltonianModel& model, const TwoState& s);

/// Eigenvalues of a (possibly non-symmetric) real matrix, computed on the
/// balanced matrix and sorted lexicographically by (Re, Im).
Eigen::VectorXcd sorted_spectrum(const Eigen::MatrixXd& a);

/// The n Casimirs of the bracket: coefficients of det(phi - lambda I) at
/// lambda^0, lambda^2, ..., lambda^{2(n-1)}, via the eigenvalue product
/// expansion. Warns when phi is outside sp(2n, R).
Eigen::VectorXd casimirs(const Eigen::MatrixXd& phi);

/// Same coefficients from the power sums tr(phi^k) via Newton's identities;
/// an algebraic route independent of the eigensolver.
Eigen::VectorXd casimirs_newton(const Eigen::MatrixXd& phi);

/// Moment-chart gradients of all n Casimirs, one column per Casimir,
/// computed analytically through the Newton-identity recursion.
Eigen::MatrixXd casimir_gradients(int n, const Eigen::VectorXd& moments);

/// max_j |Omega(x, m) * grad C_j|; zero when every Casimir sits in the
/// kernel of the bracket.
double casimir_kernel_check(const Eigen::VectorXd& x, const Eigen::VectorXd& moments);

/// Rank with singular values below rel_tol * sigma_max counted as zero.
int numerical_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-10);

}  // namespace twosys
