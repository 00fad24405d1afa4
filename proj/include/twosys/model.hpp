#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <vector>

namespace twosys {

/// Standard symplectic matrix [[0, I_n], [-I_n, 0]] of order 2n.
Eigen::MatrixXd standard_j(int n);

/// One monomial term coeff * prod_k x_k^{exponents[k]}.
/// The exponent list has one entry per phase-space coordinate (length 2n).
struct MonomialTerm {
  double coeff = 0.0;
  std::vector<int> exponents;
};

/// Hamilton's function H on R^{2n} together with every derivative the
/// dynamics consumes: the gradient H', the Hessian H'', and the
/// third-derivative contraction
///
///   third_contract(x, M)_k = sum_{i,j} d^3H/dx_i dx_j dx_k (x) * M_ij,
///
/// i.e. the x-gradient of tr(H''(x) M) for a fixed symmetric M.
///
/// Coordinates are ordered (positions, momenta): (x_i, x_{i+n}) are
/// conjugate pairs. Polynomial models differentiate their term lists
/// symbolically at construction and are exact; black-box models use central
/// finite differences.
///
/// Models are immutable after construction; all evaluations are pure.
class HamiltonianModel {
 public:
  using ScalarFn = std::function<double(const Eigen::VectorXd&)>;

  /// Polynomial model from monomial terms. Every exponent list must have
  /// length 2n.
  static HamiltonianModel polynomial(int n, std::vector<MonomialTerm> terms);

  /// Black-box model around a scalar evaluator. h_fd <= 0 selects an
  /// automatic step (cbrt of machine epsilon, scaled by max(1, |x|)).
  static HamiltonianModel black_box(int n, ScalarFn f, double h_fd = 0.0);

  /// H(q,p) = (q^2 + p^2)/2 + eps q^4/4, one degree of freedom.
  static HamiltonianModel quartic(double eps);

  /// H(x) = x^t S x / 2 + b^t x + c with S symmetric 2n x 2n.
  static HamiltonianModel quadratic(const Eigen::MatrixXd& s,
                                    const Eigen::VectorXd& b, double c);

  int n() const { return n_; }
  int dim() const { return 2 * n_; }
  bool is_polynomial() const { return poly_ != nullptr; }
  const std::vector<MonomialTerm>& terms() const;

  /// Largest total degree over the term list. Polynomial models only.
  int degree() const;

  double eval_h(const Eigen::VectorXd& x) const;
  Eigen::VectorXd grad_h(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd hess_h(const Eigen::VectorXd& x) const;

  /// Gradient of x -> tr(H''(x) M). M must be symmetric within tolerance.
  Eigen::VectorXd third_contract(const Eigen::VectorXd& x,
                                 const Eigen::MatrixXd& m) const;

 private:
  HamiltonianModel() = default;

  struct PolyData;
  struct BlackBoxData;

  int n_ = 0;
  std::shared_ptr<const PolyData> poly_;
  std::shared_ptr<const BlackBoxData> bb_;
};

}  // namespace twosys
