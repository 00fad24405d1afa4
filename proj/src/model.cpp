#include "twosys/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace twosys {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_dim(const Eigen::VectorXd& x, int dim, const char* where) {
  if (x.size() != dim) {
    throw std::invalid_argument(std::string(where) + ": expected vector of length " +
                                std::to_string(dim) + ", got " +
                                std::to_string(x.size()));
  }
}

double eval_terms(const std::vector<MonomialTerm>& terms, const Eigen::VectorXd& x) {
  double sum = 0.0;
  for (const auto& t : terms) {
    double v = t.coeff;
    for (size_t k = 0; k < t.exponents.size(); ++k) {
      for (int e = 0; e < t.exponents[k]; ++e) v *= x[static_cast<Eigen::Index>(k)];
    }
    sum += v;
  }
  return sum;
}

std::vector<MonomialTerm> diff_terms(const std::vector<MonomialTerm>& terms, int k) {
  std::vector<MonomialTerm> out;
  for (const auto& t : terms) {
    if (t.exponents[k] == 0 || t.coeff == 0.0) continue;
    MonomialTerm d = t;
    d.coeff = t.coeff * t.exponents[k];
    d.exponents[k] -= 1;
    out.push_back(std::move(d));
  }
  return out;
}

// Row-major index into the upper triangle (i <= j) of a dim x dim matrix.
int ut_index(int dim, int i, int j) { return i * dim - i * (i - 1) / 2 + (j - i); }
int ut_count(int dim) { return dim * (dim + 1) / 2; }

}  // namespace

struct HamiltonianModel::PolyData {
  std::vector<MonomialTerm> terms;
  std::vector<std::vector<MonomialTerm>> grad;           // [k]
  std::vector<std::vector<MonomialTerm>> hess;           // [ut(i,j)]
  std::vector<std::vector<MonomialTerm>> third;          // [ut(i,j) * dim + k]
};

struct HamiltonianModel::BlackBoxData {
  ScalarFn f;
  double h_fd = 0.0;  // <= 0 means automatic

  // Central-difference steps balanced per derivative order. An explicit
  // h_fd is used as given; the automatic choice is eps^(1/(order+2)) times
  // max(1, |x|), and explicit steps are floored there for orders 2 and 3
  // so the difference quotients stay above roundoff.
  double step(int order, const Eigen::VectorXd& x) const {
    const double scale = std::max(1.0, x.norm());
    const double balanced = std::pow(kEps, 1.0 / (order + 2)) * scale;
    if (h_fd > 0.0) return order == 1 ? h_fd : std::max(h_fd, balanced);
    return balanced;
  }
};

Eigen::MatrixXd standard_j(int n) {
  if (n < 1) throw std::invalid_argument("standard_j: n must be >= 1");
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  j.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  return j;
}

HamiltonianModel HamiltonianModel::polynomial(int n, std::vector<MonomialTerm> terms) {
  if (n < 1) throw std::invalid_argument("HamiltonianModel: n must be >= 1");
  const int dim = 2 * n;
  for (const auto& t : terms) {
    if (static_cast<int>(t.exponents.size()) != dim) {
      throw std::invalid_argument("HamiltonianModel: exponent list length must be 2n");
    }
    for (int e : t.exponents) {
      if (e < 0) throw std::invalid_argument("HamiltonianModel: negative exponent");
    }
  }

  auto data = std::make_shared<PolyData>();
  data->terms = std::move(terms);
  data->grad.resize(dim);
  for (int k = 0; k < dim; ++k) data->grad[k] = diff_terms(data->terms, k);
  data->hess.resize(ut_count(dim));
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j)
      data->hess[ut_index(dim, i, j)] = diff_terms(data->grad[i], j);
  data->third.resize(static_cast<size_t>(ut_count(dim)) * dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        data->third[static_cast<size_t>(ut_index(dim, i, j)) * dim + k] =
            diff_terms(data->hess[ut_index(dim, i, j)], k);

  HamiltonianModel m;
  m.n_ = n;
  m.poly_ = std::move(data);
  return m;
}

HamiltonianModel HamiltonianModel::black_box(int n, ScalarFn f, double h_fd) {
  if (n < 1) throw std::invalid_argument("HamiltonianModel: n must be >= 1");
  if (!f) throw std::invalid_argument("HamiltonianModel: null evaluator");
  auto data = std::make_shared<BlackBoxData>();
  data->f = std::move(f);
  data->h_fd = h_fd;
  HamiltonianModel m;
  m.n_ = n;
  m.bb_ = std::move(data);
  return m;
}

HamiltonianModel HamiltonianModel::quartic(double eps) {
  std::vector<MonomialTerm> terms = {
      {0.5, {2, 0}},
      {0.5, {0, 2}},
      {eps / 4.0, {4, 0}},
  };
  return polynomial(1, std::move(terms));
}

HamiltonianModel HamiltonianModel::quadratic(const Eigen::MatrixXd& s,
                                             const Eigen::VectorXd& b, double c) {
  const int dim = static_cast<int>(s.rows());
  if (s.cols() != dim || dim < 2 || dim % 2 != 0) {
    throw std::invalid_argument("HamiltonianModel::quadratic: S must be square 2n x 2n");
  }
  if ((s - s.transpose()).norm() > 1e-12 * std::max(1.0, s.norm())) {
    throw std::invalid_argument("HamiltonianModel::quadratic: S must be symmetric");
  }
  if (b.size() != dim) {
    throw std::invalid_argument("HamiltonianModel::quadratic: b has wrong length");
  }
  std::vector<MonomialTerm> terms;
  if (c != 0.0) terms.push_back({c, std::vector<int>(dim, 0)});
  for (int i = 0; i < dim; ++i) {
    if (b[i] != 0.0) {
      MonomialTerm t{b[i], std::vector<int>(dim, 0)};
      t.exponents[i] = 1;
      terms.push_back(std::move(t));
    }
    for (int j = i; j < dim; ++j) {
      const double coeff = (i == j) ? 0.5 * s(i, i) : s(i, j);
      if (coeff == 0.0) continue;
      MonomialTerm t{coeff, std::vector<int>(dim, 0)};
      t.exponents[i] += 1;
      t.exponents[j] += 1;
      terms.push_back(std::move(t));
    }
  }
  return polynomial(dim / 2, std::move(terms));
}

const std::vector<MonomialTerm>& HamiltonianModel::terms() const {
  if (!poly_) throw std::logic_error("HamiltonianModel::terms: not a polynomial model");
  return poly_->terms;
}

int HamiltonianModel::degree() const {
  if (!poly_) throw std::logic_error("HamiltonianModel::degree: not a polynomial model");
  int deg = 0;
  for (const auto& t : poly_->terms) {
    if (t.coeff == 0.0) continue;
    int d = 0;
    for (int e : t.exponents) d += e;
    deg = std::max(deg, d);
  }
  return deg;
}

double HamiltonianModel::eval_h(const Eigen::VectorXd& x) const {
  check_dim(x, dim(), "eval_h");
  if (poly_) return eval_terms(poly_->terms, x);
  return bb_->f(x);
}

Eigen::VectorXd HamiltonianModel::grad_h(const Eigen::VectorXd& x) const {
  check_dim(x, dim(), "grad_h");
  const int d = dim();
  Eigen::VectorXd g(d);
  if (poly_) {
    for (int k = 0; k < d; ++k) g[k] = eval_terms(poly_->grad[k], x);
    return g;
  }
  const double h = bb_->step(1, x);
  Eigen::VectorXd xp = x, xm = x;
  for (int k = 0; k < d; ++k) {
    xp[k] = x[k] + h;
    xm[k] = x[k] - h;
    g[k] = (bb_->f(xp) - bb_->f(xm)) / (2.0 * h);
    xp[k] = x[k];
    xm[k] = x[k];
  }
  return g;
}

Eigen::MatrixXd HamiltonianModel::hess_h(const Eigen::VectorXd& x) const {
  check_dim(x, dim(), "hess_h");
  const int d = dim();
  Eigen::MatrixXd h2(d, d);
  if (poly_) {
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j)
        h2(i, j) = h2(j, i) = eval_terms(poly_->hess[ut_index(d, i, j)], x);
    return h2;
  }
  const double h = bb_->step(2, x);
  Eigen::VectorXd xx = x;
  for (int i = 0; i < d; ++i) {
    // diagonal: standard three-point second difference
    xx[i] = x[i] + h;
    const double fp = bb_->f(xx);
    xx[i] = x[i] - h;
    const double fm = bb_->f(xx);
    xx[i] = x[i];
    h2(i, i) = (fp - 2.0 * bb_->f(x) + fm) / (h * h);
    for (int j = i + 1; j < d; ++j) {
      xx[i] = x[i] + h; xx[j] = x[j] + h;
      const double fpp = bb_->f(xx);
      xx[j] = x[j] - h;
      const double fpm = bb_->f(xx);
      xx[i] = x[i] - h; xx[j] = x[j] + h;
      const double fmp = bb_->f(xx);
      xx[j] = x[j] - h;
      const double fmm = bb_->f(xx);
      xx[i] = x[i]; xx[j] = x[j];
      h2(i, j) = h2(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
    }
  }
  return 0.5 * (h2 + h2.transpose());
}

Eigen::VectorXd HamiltonianModel::third_contract(const Eigen::VectorXd& x,
                                                 const Eigen::MatrixXd& m) const {
  check_dim(x, dim(), "third_contract");
  const int d = dim();
  if (m.rows() != d || m.cols() != d) {
    throw std::invalid_argument("third_contract: M must be 2n x 2n");
  }
  const double asym = (m - m.transpose()).norm();
  if (asym > 1e-9 * std::max(1.0, m.norm())) {
    throw std::invalid_argument("third_contract: M is not symmetric");
  }

  Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
  if (poly_) {
    for (int k = 0; k < d; ++k) {
      double sum = 0.0;
      for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
          const double hij =
              eval_terms(poly_->third[static_cast<size_t>(ut_index(d, i, j)) * d + k], x);
          if (hij == 0.0) continue;
          sum += hij * m(i, j) * (i == j ? 1.0 : 2.0);
        }
      }
      out[k] = sum;
    }
    return out;
  }

  const double h = bb_->step(3, x);
  Eigen::VectorXd xx = x;
  for (int k = 0; k < d; ++k) {
    xx[k] = x[k] + h;
    const Eigen::MatrixXd hp = hess_h(xx);
    xx[k] = x[k] - h;
    const Eigen::MatrixXd hm = hess_h(xx);
    xx[k] = x[k];
    out[k] = ((hp - hm) / (2.0 * h)).cwiseProduct(m).sum();
  }
  return out;
}

}  // namespace twosys
