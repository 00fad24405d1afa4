#include "twosys/structure.hpp"

#include "twosys/model.hpp"

#include <cmath>
#include <stdexcept>

namespace twosys {

namespace {

void check_square(const Eigen::MatrixXd& m, const char* where) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(where) + ": matrix must be square");
  }
}

void check_symmetric(const Eigen::MatrixXd& m, const char* where) {
  check_square(m, where);
  if ((m - m.transpose()).norm() > 1e-9 * std::max(1.0, m.norm())) {
    throw std::invalid_argument(std::string(where) + ": matrix must be symmetric");
  }
}

}  // namespace

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> split_sym_antisym(const Eigen::MatrixXd& m) {
  check_square(m, "split_sym_antisym");
  Eigen::MatrixXd ms = 0.5 * (m + m.transpose());
  Eigen::MatrixXd ma = 0.5 * (m - m.transpose());
  return {std::move(ms), std::move(ma)};
}

Signature signature_of(const Eigen::MatrixXd& m, double tol) {
  check_symmetric(m, "signature_of");
  if (tol <= 0.0) tol = kSignatureZeroTol;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const double band = tol * std::max(1.0, m.norm());
  Signature sig;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double lam = es.eigenvalues()[k];
    if (std::abs(lam) <= band) {
      ++sig.m_zero;
    } else if (lam > 0.0) {
      ++sig.m_plus;
    } else {
      ++sig.m_minus;
    }
  }
  return sig;
}

std::pair<std::vector<Eigen::VectorXd>, std::vector<Eigen::VectorXd>> decompose_signature(
    const Eigen::MatrixXd& m, double tol) {
  check_symmetric(m, "decompose_signature");
  if (tol <= 0.0) tol = kSignatureZeroTol;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const double band = tol * std::max(1.0, m.norm());

  // Descending eigenvalue order; the solver returns ascending.
  std::vector<Eigen::VectorXd> ys, zs;
  const Eigen::Index dim = m.rows();
  for (Eigen::Index k = dim - 1; k >= 0; --k) {
    const double lam = es.eigenvalues()[k];
    if (std::abs(lam) <= band) continue;
    Eigen::VectorXd v = std::sqrt(std::abs(lam)) * es.eigenvectors().col(k);
    if (lam > 0.0) {
      ys.push_back(std::move(v));
    } else {
      zs.push_back(std::move(v));
    }
  }
  return {std::move(ys), std::move(zs)};
}

Eigen::MatrixXd compose(const std::vector<Eigen::VectorXd>& ys,
                        const std::vector<Eigen::VectorXd>& zs, int dim) {
  if (dim < 0) {
    if (!ys.empty()) {
      dim = static_cast<int>(ys.front().size());
    } else if (!zs.empty()) {
      dim = static_cast<int>(zs.front().size());
    } else {
      throw std::invalid_argument("compose: empty lists need an explicit dim");
    }
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& y : ys) {
    if (y.size() != dim) throw std::invalid_argument("compose: vector length mismatch");
    m.noalias() += y * y.transpose();
  }
  for (const auto& z : zs) {
    if (z.size() != dim) throw std::invalid_argument("compose: vector length mismatch");
    m.noalias() -= z * z.transpose();
  }
  return m;
}

double sp_residual(const Eigen::MatrixXd& phi) {
  check_square(phi, "sp_residual");
  if (phi.rows() % 2 != 0) {
    throw std::invalid_argument("sp_residual: matrix order must be even");
  }
  const Eigen::MatrixXd j = standard_j(static_cast<int>(phi.rows()) / 2);
  return (phi.transpose() * j + j * phi).norm();
}

}  // namespace twosys
