#pragma once

#include "twosys/dynamics.hpp"
#include "twosys/integrate.hpp"
#include "twosys/model.hpp"

#include <Eigen/Dense>

#include <vector>

namespace twosys {

/// H(x) = x^t S x / 2 + b^t x + c with S symmetric.
struct QuadraticModel {
  Eigen::MatrixXd s;
  Eigen::VectorXd b;
  double c = 0.0;

  int n() const { return static_cast<int>(s.rows()) / 2; }

  /// Extracts (S, b, c) from a polynomial model of degree <= 2.
  /// Throws OraclePreconditionError otherwise.
  static QuadraticModel from_model(const HamiltonianModel& model);

  HamiltonianModel to_model() const;
};

/// General solution of the two-system for quadratic H, where the flow
/// splits: x(t) solves x' = J(Sx + b) by constant-coefficient exponential
/// (affine part through the augmented matrix) and
/// phi(t) = e^{tA} phi0 e^{-tA} with the constant A = S J.
TwoState quadratic_closed_form(const QuadraticModel& qm, const Eigen::VectorXd& x0,
                               const Eigen::MatrixXd& phi0, double t);

/// Scalar Hamilton's function of the action variable, H(I) = sum c_k I^k.
struct ActionAngleModel {
  std::vector<double> coeffs;

  double h1(double i) const;  // H'(I)
  double h2(double i) const;  // H''(I)
  double h3(double i) const;  // H'''(I)
};

struct ActionAngleState {
  double action = 0.0;
  double angle = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

/// The action-angle moment system taken as a self-contained linear system:
///   I' = 0, theta' = H'(I) + H'''(I) alpha,
///   alpha' = 0, beta' = H''(I) beta, gamma' = 2 H''(I) beta.
ActionAngleState action_angle_rhs(const ActionAngleModel& am, const ActionAngleState& s);

/// Its closed form: theta = theta0 + w1 t, beta = beta0 e^{w2 t},
/// gamma = 2 beta0 (e^{w2 t} - 1) + gamma0, with w1 = H'(I0) + H'''(I0) alpha0
/// and w2 = H''(I0). The w2 = 0 limit freezes beta and gamma.
ActionAngleState action_angle_closed_form(const ActionAngleModel& am,
                                          const ActionAngleState& s0, double t);

/// Two-degree-of-freedom polynomial model H(x) = H(x_1) with x = (I, theta),
/// for driving the full two-system on an action-only Hamiltonian.
HamiltonianModel action_angle_model(const ActionAngleModel& am);

/// Special solution with phi(0) = 0: x(t) follows the base system (obtained
/// numerically with the given integrator settings) and phi stays zero.
TwoState zero_phi_solution(const HamiltonianModel& model, const Eigen::VectorXd& x0,
                           double t, const IntegratorConfig& cfg);

/// Special solution pinned at a stationary point where the third
/// derivatives vanish: x(t) = x0 and phi(t) = e^{tA0} phi0 e^{-tA0} with
/// A0 = A(x0). Throws OraclePreconditionError when H'(x0) != 0 or when
/// third_contract(x0, .) is nonzero on a basis of symmetric matrices.
TwoState stationary_point_solution(const HamiltonianModel& model,
                                   const Eigen::VectorXd& x0,
                                   const Eigen::MatrixXd& phi0, double t);

}  // namespace twosys
