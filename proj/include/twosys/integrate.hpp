#pragma once

#include "twosys/dynamics.hpp"
#include "twosys/model.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace twosys {

enum class FormTag {
  Base,         // x' = J H'(x)
  NaiveUnion,   // base + system in variations, glued (the "variational" run)
  Vector,       // vector form on R^{4n}
  Two,          // two-system, symmetric moment matrix
  TwoGeneral,   // two-system moment flow with a full (possibly asymmetric) M
  Multivector,  // multivector form of signature (m_plus, m_minus)
  Bracket,      // two-system driven through the Poisson bracket
};

/// Which dynamical system a flat state vector encodes.
struct FormSpec {
  FormTag tag = FormTag::Base;
  int n = 1;
  int m_plus = 0;   // multivector only
  int m_minus = 0;  // multivector only

  int packed_size() const;

  static FormSpec base(int n) { return {FormTag::Base, n, 0, 0}; }
  static FormSpec naive_union(int n) { return {FormTag::NaiveUnion, n, 0, 0}; }
  static FormSpec vector_form(int n) { return {FormTag::Vector, n, 0, 0}; }
  static FormSpec two(int n) { return {FormTag::Two, n, 0, 0}; }
  static FormSpec two_general(int n) { return {FormTag::TwoGeneral, n, 0, 0}; }
  static FormSpec multivector(int n, int m_plus, int m_minus) {
    return {FormTag::Multivector, n, m_plus, m_minus};
  }
  static FormSpec bracket(int n) { return {FormTag::Bracket, n, 0, 0}; }
};

// Flat packings used by the integrator and the CSV layer. Two-system states
// store the upper triangle of the symmetric M; TwoGeneral stores M row-major
// in full.
Eigen::VectorXd pack_pair(const VectorFormState& s);
VectorFormState unpack_pair(int n, const Eigen::VectorXd& v);
Eigen::VectorXd pack_two_state(const TwoState& s);
TwoState unpack_two_state(int n, const Eigen::VectorXd& v);
Eigen::VectorXd pack_two_general(const TwoState& s);
TwoState unpack_two_general(int n, const Eigen::VectorXd& v);
Eigen::VectorXd pack_multivector(const MultiVectorState& s);
MultiVectorState unpack_multivector(int n, int m_plus, int m_minus, const Eigen::VectorXd& v);

/// Right-hand side of the form's dynamics on packed states.
Eigen::VectorXd form_rhs(const HamiltonianModel& model, const FormSpec& form,
                         const Eigen::VectorXd& packed);

struct IntegratorConfig {
  enum class Method { Rk4, Adaptive45 };

  Method method = Method::Adaptive45;
  double step = 1e-3;    // fixed-step size (Rk4)
  double rtol = 1e-10;   // adaptive relative tolerance
  double atol = 1e-12;   // adaptive absolute tolerance
  double t_end = 10.0;
  int sample_stride = 1;  // record every k-th accepted step
};

struct Trajectory {
  FormSpec form;
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;

  size_t size() const { return times.size(); }
};

/// Integrates the form's dynamics from the packed initial state over
/// [0, cfg.t_end]. Samples the initial state, every sample_stride-th
/// accepted step, and the final time. Throws StepUnderflowError when the
/// adaptive step collapses and std::runtime_error on non-finite states.
Trajectory integrate(const HamiltonianModel& model, const Eigen::VectorXd& packed0,
                     const FormSpec& form, const IntegratorConfig& cfg);

/// Same flow, but records exactly at the given times (nondecreasing,
/// starting at >= 0); integration ends at sample_times.back(). Step sizes
/// are clamped so every sample time is hit exactly.
Trajectory integrate_at(const HamiltonianModel& model, const Eigen::VectorXd& packed0,
                        const FormSpec& form, const IntegratorConfig& cfg,
                        const std::vector<double>& sample_times);

struct InvariantSeries {
  std::vector<double> values;
  double max_drift = 0.0;  // max |v(t) - v(0)| / max(1, |v(0)|)
};

/// Conserved-quantity series along a trajectory. Every form reports its
/// energy; two-system forms add Casimirs, the sorted phi-spectrum, the
/// signature counts of M, and the sp residual. TwoGeneral trajectories also
/// monitor the antisymmetric part (frozen for n = 1, isospectral otherwise).
struct InvariantReport {
  std::map<std::string, InvariantSeries> series;
};

InvariantReport invariant_report(const HamiltonianModel& model, const Trajectory& traj);

/// JSON object keyed by invariant name, each entry carrying "values" and
/// "max_drift".
std::string report_json(const InvariantReport& report);

/// CSV trajectory export: header `t,x1,...` plus the form's state columns
/// (`M11,M12,...` upper triangle for two-system forms), 17 significant
/// digits, '\n' line endings.
void write_trajectory_csv(const Trajectory& traj, std::ostream& os);

/// Reads a trajectory saved by write_trajectory_csv; the header must match
/// the expected form.
Trajectory read_trajectory_csv(std::istream& is, const FormSpec& form);

}  // namespace twosys
