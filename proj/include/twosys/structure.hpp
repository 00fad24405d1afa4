#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace twosys {

/// Eigenvalue-sign counts of a symmetric matrix. m_plus + m_minus + m_zero
/// equals the matrix order; rank = m_plus + m_minus.
struct Signature {
  int m_plus = 0;
  int m_minus = 0;
  int m_zero = 0;

  int rank() const { return m_plus + m_minus; }
  bool operator==(const Signature&) const = default;
};

/// Relative band below which eigenvalues count as zero.
inline constexpr double kSignatureZeroTol = 1e-9;

/// (M + M^t)/2 and (M - M^t)/2. The parts recombine to M exactly.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> split_sym_antisym(const Eigen::MatrixXd& m);

/// Sign counts of the spectrum of a symmetric matrix; eigenvalues with
/// |lambda| <= tol * max(1, |M|) count as zero. tol <= 0 selects the
/// default band.
Signature signature_of(const Eigen::MatrixXd& m, double tol = kSignatureZeroTol);

/// Splits a symmetric M into M = sum y_i y_i^t - sum z_j z_j^t via its
/// eigendecomposition: one vector per nonzero eigenvalue, scaled by
/// sqrt(|lambda|). The output is one representative of the pseudo-orthogonal
/// orbit of such decompositions.
std::pair<std::vector<Eigen::VectorXd>, std::vector<Eigen::VectorXd>> decompose_signature(
    const Eigen::MatrixXd& m, double tol = kSignatureZeroTol);

/// sum y_i y_i^t - sum z_j z_j^t. dim disambiguates when both lists are
/// empty; otherwise it must agree with the vectors.
Eigen::MatrixXd compose(const std::vector<Eigen::VectorXd>& ys,
                        const std::vector<Eigen::VectorXd>& zs, int dim = -1);

/// Frobenius norm of phi^t J + J phi; zero iff phi is in sp(2n, R).
double sp_residual(const Eigen::MatrixXd& phi);

}  // namespace twosys
