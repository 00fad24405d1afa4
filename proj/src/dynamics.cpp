#include "twosys/dynamics.hpp"

#include "twosys/structure.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace twosys {

namespace {

void check_x(const HamiltonianModel& model, const Eigen::VectorXd& x, const char* where) {
  if (x.size() != model.dim()) {
    throw std::invalid_argument(std::string(where) + ": state length must be 2n");
  }
}

void check_m(const HamiltonianModel& model, const Eigen::MatrixXd& m, const char* where) {
  if (m.rows() != model.dim() || m.cols() != model.dim()) {
    throw std::invalid_argument(std::string(where) + ": moment matrix must be 2n x 2n");
  }
}

}  // namespace

Eigen::MatrixXd TwoState::phi() const {
  const Eigen::MatrixXd j = standard_j(static_cast<int>(x.size()) / 2);
  return j * m;
}

TwoState TwoState::from_phi(Eigen::VectorXd x, const Eigen::MatrixXd& phi) {
  const Eigen::MatrixXd j = standard_j(static_cast<int>(x.size()) / 2);
  return TwoState{std::move(x), -j * phi};
}

Eigen::VectorXd base_rhs(const HamiltonianModel& model, const Eigen::VectorXd& x) {
  check_x(model, x, "base_rhs");
  return standard_j(model.n()) * model.grad_h(x);
}

Eigen::VectorXd variational_rhs(const HamiltonianModel& model, const Eigen::VectorXd& x,
                                const Eigen::VectorXd& y) {
  check_x(model, x, "variational_rhs");
  check_x(model, y, "variational_rhs");
  return standard_j(model.n()) * (model.hess_h(x) * y);
}

VectorFormState vector_form_rhs(const HamiltonianModel& model, const VectorFormState& s) {
  check_x(model, s.x, "vector_form_rhs");
  check_x(model, s.y, "vector_form_rhs");
  const Eigen::MatrixXd j = standard_j(model.n());
  const Eigen::MatrixXd yyt = s.y * s.y.transpose();
  VectorFormState d;
  d.x = j * (model.grad_h(s.x) + 0.5 * model.third_contract(s.x, yyt));
  d.y = j * (model.hess_h(s.x) * s.y);
  return d;
}

Eigen::MatrixXd lax_matrix(const HamiltonianModel& model, const Eigen::VectorXd& x) {
  check_x(model, x, "lax_matrix");
  return model.hess_h(x) * standard_j(model.n());
}

Eigen::MatrixXd moment_rhs(const HamiltonianModel& model, const Eigen::VectorXd& x,
                           const Eigen::MatrixXd& m) {
  check_x(model, x, "moment_rhs");
  check_m(model, m, "moment_rhs");
  const Eigen::MatrixXd j = standard_j(model.n());
  const Eigen::MatrixXd jh = j * model.hess_h(x);
  // M' = J H'' M + M H'' J^t, and M H'' J^t = (J H'' M^t)^t
  return jh * m + (jh * m.transpose()).transpose();
}

TwoState two_system_rhs_general(const HamiltonianModel& model, const TwoState& s) {
  check_x(model, s.x, "two_system_rhs");
  check_m(model, s.m, "two_system_rhs");
  // Only the symmetric part of M enters the x-equation.
  const Eigen::MatrixXd ms = 0.5 * (s.m + s.m.transpose());
  TwoState d;
  d.x = standard_j(model.n()) *
        (model.grad_h(s.x) + 0.5 * model.third_contract(s.x, ms));
  d.m = moment_rhs(model, s.x, s.m);
  return d;
}

TwoState two_system_rhs(const HamiltonianModel& model, const TwoState& s) {
  check_x(model, s.x, "two_system_rhs");
  check_m(model, s.m, "two_system_rhs");
  // For phi = J M the sp residual equals 2 |M_a|_F.
  const double residual = (s.m - s.m.transpose()).norm();
  const double tol = kSpResidualTol * std::max(1.0, (standard_j(model.n()) * s.m).norm());
  if (residual > tol) {
    std::fprintf(stderr,
                 "twosys: warning: two_system_rhs input leaves sp(2n): residual %.3e "
                 "(tol %.3e); proceeding\n",
                 residual, tol);
  }
  return two_system_rhs_general(model, s);
}

MultiVectorState multivector_rhs(const HamiltonianModel& model, const MultiVectorState& s) {
  check_x(model, s.x, "multivector_rhs");
  const int dim = model.dim();
  if (static_cast<int>(s.ys.size() + s.zs.size()) > dim) {
    throw std::invalid_argument("multivector_rhs: m_plus + m_minus must be <= 2n");
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& y : s.ys) {
    check_x(model, y, "multivector_rhs");
    m.noalias() += y * y.transpose();
  }
  for (const auto& z : s.zs) {
    check_x(model, z, "multivector_rhs");
    m.noalias() -= z * z.transpose();
  }
  const Eigen::MatrixXd j = standard_j(model.n());
  const Eigen::MatrixXd jh = j * model.hess_h(s.x);
  MultiVectorState d;
  d.x = j * (model.grad_h(s.x) + 0.5 * model.third_contract(s.x, m));
  d.ys.reserve(s.ys.size());
  d.zs.reserve(s.zs.size());
  for (const auto& y : s.ys) d.ys.push_back(jh * y);
  for (const auto& z : s.zs) d.zs.push_back(jh * z);
  return d;
}

VectorFormState naive_union_rhs(const HamiltonianModel& model, const VectorFormState& s) {
  check_x(model, s.x, "naive_union_rhs");
  check_x(model, s.y, "naive_union_rhs");
  VectorFormState d;
  d.x = base_rhs(model, s.x);
  d.y = variational_rhs(model, s.x, s.y);
  return d;
}

double hamiltonicity_defect(const HamiltonianModel& model, const VectorFormState& s) {
  check_x(model, s.x, "hamiltonicity_defect");
  check_x(model, s.y, "hamiltonicity_defect");
  const int dim = model.dim();
  const Eigen::MatrixXd j = standard_j(model.n());

  // g(s) = (J + J)^{-1} f(s) = -(J + J) f(s); the field is locally
  // Hamiltonian iff the Jacobian of g is symmetric.
  auto g = [&](const Eigen::VectorXd& v) {
    VectorFormState st{v.head(dim), v.tail(dim)};
    const VectorFormState f = naive_union_rhs(model, st);
    Eigen::VectorXd out(2 * dim);
    out.head(dim) = -j * f.x;
    out.tail(dim) = -j * f.y;
    return out;
  };

  Eigen::VectorXd v(2 * dim);
  v.head(dim) = s.x;
  v.tail(dim) = s.y;
  const double h = 1e-5 * std::max(1.0, v.norm());

  Eigen::MatrixXd jac(2 * dim, 2 * dim);
  Eigen::VectorXd vp = v, vm = v;
  for (int k = 0; k < 2 * dim; ++k) {
    vp[k] = v[k] + h;
    vm[k] = v[k] - h;
    jac.col(k) = (g(vp) - g(vm)) / (2.0 * h);
    vp[k] = v[k];
    vm[k] = v[k];
  }
  return (0.5 * (jac - jac.transpose())).norm();
}

}  // namespace twosys
