#include "twosys/oracles.hpp"

#include "twosys/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace twosys {

QuadraticModel QuadraticModel::from_model(const HamiltonianModel& model) {
  if (!model.is_polynomial()) {
    throw OraclePreconditionError("quadratic oracle: model is not polynomial");
  }
  if (model.degree() > 2) {
    throw OraclePreconditionError("quadratic oracle: Hamilton's function has degree > 2");
  }
  const int dim = model.dim();
  QuadraticModel qm;
  qm.s = Eigen::MatrixXd::Zero(dim, dim);
  qm.b = Eigen::VectorXd::Zero(dim);
  qm.c = 0.0;
  for (const auto& term : model.terms()) {
    int total = 0;
    int first = -1, second = -1;
    for (int k = 0; k < dim; ++k) {
      for (int e = 0; e < term.exponents[k]; ++e) {
        if (first < 0) {
          first = k;
        } else {
          second = k;
        }
        ++total;
      }
    }
    if (total == 0) {
      qm.c += term.coeff;
    } else if (total == 1) {
      qm.b[first] += term.coeff;
    } else {
      if (first == second) {
        qm.s(first, first) += 2.0 * term.coeff;
      } else {
        qm.s(first, second) += term.coeff;
        qm.s(second, first) += term.coeff;
      }
    }
  }
  return qm;
}

HamiltonianModel QuadraticModel::to_model() const {
  return HamiltonianModel::quadratic(s, b, c);
}

TwoState quadratic_closed_form(const QuadraticModel& qm, const Eigen::VectorXd& x0,
                               const Eigen::MatrixXd& phi0, double t) {
  const int dim = static_cast<int>(qm.s.rows());
  if (x0.size() != dim || phi0.rows() != dim || phi0.cols() != dim) {
    throw std::invalid_argument("quadratic_closed_form: dimension mismatch");
  }
  const Eigen::MatrixXd j = standard_j(dim / 2);

  // Augmented constant-coefficient system for the affine base flow.
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(dim + 1, dim + 1);
  k.topLeftCorner(dim, dim) = j * qm.s;
  k.topRightCorner(dim, 1) = j * qm.b;
  Eigen::VectorXd aug(dim + 1);
  aug << x0, 1.0;
  const Eigen::VectorXd xt = (t * k).exp() * aug;

  const Eigen::MatrixXd a = qm.s * j;
  const Eigen::MatrixXd phit = (t * a).exp() * phi0 * (-t * a).exp();
  return TwoState::from_phi(xt.head(dim), phit);
}

double ActionAngleModel::h1(double i) const {
  double acc = 0.0, p = 1.0;
  for (size_t k = 1; k < coeffs.size(); ++k) {
    acc += coeffs[k] * static_cast<double>(k) * p;
    p *= i;
  }
  return acc;
}

double ActionAngleModel::h2(double i) const {
  double acc = 0.0, p = 1.0;
  for (size_t k = 2; k < coeffs.size(); ++k) {
    acc += coeffs[k] * static_cast<double>(k * (k - 1)) * p;
    p *= i;
  }
  return acc;
}

double ActionAngleModel::h3(double i) const {
  double acc = 0.0, p = 1.0;
  for (size_t k = 3; k < coeffs.size(); ++k) {
    acc += coeffs[k] * static_cast<double>(k * (k - 1) * (k - 2)) * p;
    p *= i;
  }
  return acc;
}

ActionAngleState action_angle_rhs(const ActionAngleModel& am, const ActionAngleState& s) {
  ActionAngleState d;
  d.action = 0.0;
  d.angle = am.h1(s.action) + am.h3(s.action) * s.alpha;
  d.alpha = 0.0;
  d.beta = am.h2(s.action) * s.beta;
  d.gamma = 2.0 * am.h2(s.action) * s.beta;
  return d;
}

ActionAngleState action_angle_closed_form(const ActionAngleModel& am,
                                          const ActionAngleState& s0, double t) {
  const double w1 = am.h1(s0.action) + am.h3(s0.action) * s0.alpha;
  const double w2 = am.h2(s0.action);
  ActionAngleState s = s0;
  s.angle = s0.angle + w1 * t;
  const double growth = std::exp(w2 * t);
  s.beta = s0.beta * growth;
  s.gamma = 2.0 * s0.beta * (growth - 1.0) + s0.gamma;
  return s;
}

HamiltonianModel action_angle_model(const ActionAngleModel& am) {
  std::vector<MonomialTerm> terms;
  for (size_t k = 0; k < am.coeffs.size(); ++k) {
    if (am.coeffs[k] == 0.0) continue;
    terms.push_back({am.coeffs[k], {static_cast<int>(k), 0}});
  }
  return HamiltonianModel::polynomial(1, std::move(terms));
}

TwoState zero_phi_solution(const HamiltonianModel& model, const Eigen::VectorXd& x0,
                           double t, const IntegratorConfig& cfg) {
  if (t < 0.0) throw std::invalid_argument("zero_phi_solution: t must be >= 0");
  TwoState out;
  out.m = Eigen::MatrixXd::Zero(model.dim(), model.dim());
  if (t == 0.0) {
    out.x = x0;
    return out;
  }
  const Trajectory traj =
      integrate_at(model, x0, FormSpec::base(model.n()), cfg, {t});
  out.x = traj.states.back();
  return out;
}

TwoState stationary_point_solution(const HamiltonianModel& model,
                                   const Eigen::VectorXd& x0,
                                   const Eigen::MatrixXd& phi0, double t) {
  const int dim = model.dim();
  if (x0.size() != dim || phi0.rows() != dim || phi0.cols() != dim) {
    throw std::invalid_argument("stationary_point_solution: dimension mismatch");
  }
  const double tol = 1e-10;
  if (model.grad_h(x0).norm() > tol * std::max(1.0, x0.norm())) {
    throw OraclePreconditionError("stationary point oracle: H'(x0) != 0");
  }
  // Third derivatives must vanish at x0: probe the contraction on a basis
  // of symmetric matrices.
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(dim, dim);
      basis(i, j) = basis(j, i) = 1.0;
      if (model.third_contract(x0, basis).norm() > tol) {
        throw OraclePreconditionError(
            "stationary point oracle: third derivatives do not vanish at x0");
      }
    }
  }
  const Eigen::MatrixXd a0 = lax_matrix(model, x0);
  const Eigen::MatrixXd phit = (t * a0).exp() * phi0 * (-t * a0).exp();
  return TwoState::from_phi(x0, phit);
}

}  // namespace twosys
