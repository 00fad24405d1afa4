#include "twosys/poisson.hpp"

#include "twosys/structure.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>
#include <vector>

namespace twosys {

namespace {

// dM/dm_u for moment index u = (i, j), i <= j.
Eigen::MatrixXd moment_direction(int dim, int i, int j) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(dim, dim);
  d(i, j) += 1.0;
  d(j, i) += 1.0;
  if (i == j) d(i, j) = 1.0;
  return d;
}

// sp-valued gradient representative of the coordinate function m_u.
Eigen::MatrixXd moment_gradient_rep(const Eigen::MatrixXd& j, int i, int k) {
  const int dim = static_cast<int>(j.rows());
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(dim, dim);
  if (i == k) {
    s(i, i) = 1.0;
  } else {
    s(i, k) = 0.5;
    s(k, i) = 0.5;
  }
  return j * s;
}

int infer_n_from_moments(const Eigen::VectorXd& moments, const char* where) {
  for (int n = 1; n <= 64; ++n) {
    if (moment_count(n) == moments.size()) return n;
  }
  throw std::invalid_argument(std::string(where) + ": moment vector has no valid length");
}

void warn_sp(const Eigen::MatrixXd& phi, const char* where) {
  const double res = sp_residual(phi);
  if (res > kSpResidualTol * std::max(1.0, phi.norm())) {
    std::fprintf(stderr, "twosys: warning: %s: phi outside sp(2n): residual %.3e\n", where,
                 res);
  }
}

// Simple Parlett-Reinsch balancing: similarity scaling by powers of two
// until row and column norms agree.
Eigen::MatrixXd balanced(Eigen::MatrixXd a) {
  const Eigen::Index n = a.rows();
  bool converged = false;
  while (!converged) {
    converged = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = a.col(i).lpNorm<1>() - std::abs(a(i, i));
      double r = a.row(i).lpNorm<1>() - std::abs(a(i, i));
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      while (c < r / 2.0) {
        c *= 2.0;
        r /= 2.0;
        f *= 2.0;
      }
      while (c > r * 2.0) {
        c /= 2.0;
        r *= 2.0;
        f /= 2.0;
      }
      if (f != 1.0 && c + r < 0.95 * s) {
        converged = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
  return a;
}

// Power sums p_k = tr(phi^k) for k = 1..kmax, with phi powers retained.
struct PowerSums {
  std::vector<double> p;                 // p[k], 1-based
  std::vector<Eigen::MatrixXd> powers;   // phi^k, 0-based from identity
};

PowerSums power_sums(const Eigen::MatrixXd& phi, int kmax) {
  PowerSums ps;
  const Eigen::Index dim = phi.rows();
  ps.p.assign(kmax + 1, 0.0);
  ps.powers.reserve(kmax + 1);
  ps.powers.push_back(Eigen::MatrixXd::Identity(dim, dim));
  for (int k = 1; k <= kmax; ++k) {
    ps.powers.push_back(ps.powers.back() * phi);
    ps.p[k] = ps.powers.back().trace();
  }
  return ps;
}

}  // namespace

int moment_count(int n) {
  if (n < 1) throw std::invalid_argument("moment_count: n must be >= 1");
  return n * (2 * n + 1);
}

Eigen::VectorXd moments_from_matrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("moments_from_matrix: square input");
  const int dim = static_cast<int>(m.rows());
  Eigen::VectorXd out(dim * (dim + 1) / 2);
  int u = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) out[u++] = m(i, j);
  return out;
}

Eigen::MatrixXd matrix_from_moments(int n, const Eigen::VectorXd& moments) {
  const int dim = 2 * n;
  if (moments.size() != moment_count(n)) {
    throw std::invalid_argument("matrix_from_moments: wrong moment count");
  }
  Eigen::MatrixXd m(dim, dim);
  int u = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) m(i, j) = m(j, i) = moments[u++];
  return m;
}

Eigen::MatrixXd grad_phi_det(const Eigen::MatrixXd& phi) {
  if (phi.rows() != phi.cols()) throw std::invalid_argument("grad_phi_det: square input");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(phi);
  if (!lu.isInvertible()) {
    throw std::invalid_argument("grad_phi_det: singular matrix");
  }
  return lu.inverse().transpose() * lu.determinant();
}

Eigen::MatrixXd grad_phi_trace(const Eigen::MatrixXd& a) { return a.transpose(); }

Eigen::MatrixXd omega_matrix(const Eigen::VectorXd& x, const Eigen::VectorXd& moments) {
  const int n = infer_n_from_moments(moments, "omega_matrix");
  const int dim = 2 * n;
  if (x.size() != dim) throw std::invalid_argument("omega_matrix: x length must be 2n");
  const int nm = moment_count(n);

  const Eigen::MatrixXd j = standard_j(n);
  const Eigen::MatrixXd phi = j * matrix_from_moments(n, moments);

  std::vector<Eigen::MatrixXd> reps;
  reps.reserve(nm);
  for (int i = 0; i < dim; ++i)
    for (int k = i; k < dim; ++k) reps.push_back(moment_gradient_rep(j, i, k));

  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(dim + nm, dim + nm);
  omega.topLeftCorner(dim, dim) = j;
  const Eigen::MatrixXd phit = phi.transpose();
  for (int u = 0; u < nm; ++u) {
    for (int v = u + 1; v < nm; ++v) {
      const Eigen::MatrixXd comm = reps[u] * reps[v] - reps[v] * reps[u];
      const double w = 2.0 * (phit * comm).trace();
      omega(dim + u, dim + v) = w;
      omega(dim + v, dim + u) = -w;
    }
  }
  return omega;
}

double extended_energy(const HamiltonianModel& model, const TwoState& s) {
  if (s.x.size() != model.dim() || s.m.rows() != model.dim() || s.m.cols() != model.dim()) {
    throw std::invalid_argument("extended_energy: dimension mismatch");
  }
  return model.eval_h(s.x) + 0.5 * (model.hess_h(s.x) * s.m).trace();
}

TwoState bracket_rhs(const HamiltonianModel& model, const TwoState& s) {
  const int n = model.n();
  const int dim = 2 * n;
  if (s.x.size() != dim || s.m.rows() != dim || s.m.cols() != dim) {
    throw std::invalid_argument("bracket_rhs: dimension mismatch");
  }
  const double residual = (s.m - s.m.transpose()).norm();
  if (residual > kSpResidualTol * std::max(1.0, s.m.norm())) {
    std::fprintf(stderr,
                 "twosys: warning: bracket_rhs input leaves sp(2n): residual %.3e; "
                 "proceeding on the symmetric part\n",
                 residual);
  }
  const Eigen::MatrixXd ms = 0.5 * (s.m + s.m.transpose());
  const Eigen::VectorXd moments = moments_from_matrix(ms);
  const Eigen::MatrixXd omega = omega_matrix(s.x, moments);

  const int nm = moment_count(n);
  Eigen::VectorXd grad(dim + nm);
  grad.head(dim) = model.grad_h(s.x) + 0.5 * model.third_contract(s.x, ms);
  const Eigen::MatrixXd hess = model.hess_h(s.x);
  int u = dim;
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) grad[u++] = (i == j) ? 0.5 * hess(i, i) : hess(i, j);

  const Eigen::VectorXd dot = omega * grad;
  TwoState d;
  d.x = dot.head(dim);
  d.m = matrix_from_moments(n, dot.tail(nm));
  return d;
}

Eigen::VectorXcd sorted_spectrum(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("sorted_spectrum: square input");
  Eigen::EigenSolver<Eigen::MatrixXd> es(balanced(a), /*computeEigenvectors=*/false);
  Eigen::VectorXcd lam = es.eigenvalues();
  std::vector<std::complex<double>> v(lam.data(), lam.data() + lam.size());
  std::sort(v.begin(), v.end(), [](const auto& l, const auto& r) {
    if (l.real() != r.real()) return l.real() < r.real();
    return l.imag() < r.imag();
  });
  for (Eigen::Index k = 0; k < lam.size(); ++k) lam[k] = v[static_cast<size_t>(k)];
  return lam;
}

Eigen::VectorXd casimirs(const Eigen::MatrixXd& phi) {
  if (phi.rows() != phi.cols() || phi.rows() % 2 != 0 || phi.rows() == 0) {
    throw std::invalid_argument("casimirs: phi must be square of even order");
  }
  warn_sp(phi, "casimirs");
  const int n = static_cast<int>(phi.rows()) / 2;
  const Eigen::VectorXcd lam = sorted_spectrum(phi);

  // Expand det(phi - lambda I) = prod (lambda - lambda_i) (monic, even
  // order) into ascending-power coefficients.
  std::vector<std::complex<double>> poly{1.0};
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    std::vector<std::complex<double>> next(poly.size() + 1, 0.0);
    for (size_t k = 0; k < poly.size(); ++k) {
      next[k + 1] += poly[k];
      next[k] -= lam[i] * poly[k];
    }
    poly = std::move(next);
  }
  Eigen::VectorXd out(n);
  for (int jdx = 0; jdx < n; ++jdx) out[jdx] = poly[static_cast<size_t>(2 * jdx)].real();
  return out;
}

Eigen::VectorXd casimirs_newton(const Eigen::MatrixXd& phi) {
  if (phi.rows() != phi.cols() || phi.rows() % 2 != 0 || phi.rows() == 0) {
    throw std::invalid_argument("casimirs_newton: phi must be square of even order");
  }
  const int dim = static_cast<int>(phi.rows());
  const int n = dim / 2;
  const PowerSums ps = power_sums(phi, dim);

  // Newton's identities: e_k = (1/k) sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i.
  std::vector<double> e(dim + 1, 0.0);
  e[0] = 1.0;
  for (int k = 1; k <= dim; ++k) {
    double acc = 0.0;
    for (int i = 1; i <= k; ++i) {
      const double sign = (i % 2 == 1) ? 1.0 : -1.0;
      acc += sign * e[k - i] * ps.p[i];
    }
    e[k] = acc / k;
  }
  // Coefficient of lambda^{2j} in det(phi - lambda I) is e_{2n-2j}.
  Eigen::VectorXd out(n);
  for (int jdx = 0; jdx < n; ++jdx) out[jdx] = e[dim - 2 * jdx];
  return out;
}

Eigen::MatrixXd casimir_gradients(int n, const Eigen::VectorXd& moments) {
  const int dim = 2 * n;
  if (moments.size() != moment_count(n)) {
    throw std::invalid_argument("casimir_gradients: wrong moment count");
  }
  const Eigen::MatrixXd j = standard_j(n);
  const Eigen::MatrixXd phi = j * matrix_from_moments(n, moments);
  const PowerSums ps = power_sums(phi, dim);

  // Entry-wise gradients through the Newton recursion:
  //   grad p_i = i (phi^{i-1})^t,
  //   grad e_k = (1/k) sum (-1)^{i-1} (p_i grad e_{k-i} + e_{k-i} grad p_i).
  std::vector<double> e(dim + 1, 0.0);
  std::vector<Eigen::MatrixXd> de(dim + 1, Eigen::MatrixXd::Zero(dim, dim));
  e[0] = 1.0;
  for (int k = 1; k <= dim; ++k) {
    double acc = 0.0;
    Eigen::MatrixXd dacc = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 1; i <= k; ++i) {
      const double sign = (i % 2 == 1) ? 1.0 : -1.0;
      acc += sign * e[k - i] * ps.p[i];
      dacc += sign * (ps.p[i] * de[k - i] +
                      e[k - i] * i * ps.powers[static_cast<size_t>(i - 1)].transpose());
    }
    e[k] = acc / k;
    de[k] = dacc / k;
  }

  const int nm = moment_count(n);
  Eigen::MatrixXd out(nm, n);
  for (int jdx = 0; jdx < n; ++jdx) {
    const Eigen::MatrixXd& dphi = de[dim - 2 * jdx];
    int u = 0;
    for (int a = 0; a < dim; ++a) {
      for (int b = a; b < dim; ++b) {
        // chain rule through phi = J M: dphi/dm_u = J (E_ab + E_ba resp. E_aa)
        out(u++, jdx) = dphi.cwiseProduct(j * moment_direction(dim, a, b)).sum();
      }
    }
  }
  return out;
}

int numerical_rank(const Eigen::MatrixXd& m, double rel_tol) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > rel_tol * sv[0]) ++rank;
  }
  return rank;
}

double casimir_kernel_check(const Eigen::VectorXd& x, const Eigen::VectorXd& moments) {
  const int n = infer_n_from_moments(moments, "casimir_kernel_check");
  const int dim = 2 * n;
  const int nm = moment_count(n);
  const Eigen::MatrixXd omega = omega_matrix(x, moments);
  const Eigen::MatrixXd grads = casimir_gradients(n, moments);
  double worst = 0.0;
  for (int jdx = 0; jdx < n; ++jdx) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(dim + nm);
    g.tail(nm) = grads.col(jdx);
    worst = std::max(worst, (omega * g).norm());
  }
  return worst;
}

}  // namespace twosys
