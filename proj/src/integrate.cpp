#include "twosys/integrate.hpp"

#include "twosys/errors.hpp"
#include "twosys/poisson.hpp"
#include "twosys/structure.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace twosys {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192,
                 kB5 = -2187.0 / 6784, kB6 = 11.0 / 84;
constexpr double kE1 = 5179.0 / 57600, kE3 = 7571.0 / 16695, kE4 = 393.0 / 640,
                 kE5 = -92097.0 / 339200, kE6 = 187.0 / 2100, kE7 = 1.0 / 40;

void check_finite(const Eigen::VectorXd& y) {
  if (!y.allFinite()) throw std::runtime_error("integrate: non-finite state");
}

template <typename Rhs>
Eigen::VectorXd rk4_step(const Rhs& f, const Eigen::VectorXd& y, double h) {
  const Eigen::VectorXd k1 = f(y);
  const Eigen::VectorXd k2 = f(y + 0.5 * h * k1);
  const Eigen::VectorXd k3 = f(y + 0.5 * h * k2);
  const Eigen::VectorXd k4 = f(y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

double error_norm(const Eigen::VectorXd& y0, const Eigen::VectorXd& y1,
                  const Eigen::VectorXd& diff, double atol, double rtol) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < diff.size(); ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double q = diff[i] / sc;
    acc += q * q;
  }
  return std::sqrt(acc / static_cast<double>(diff.size()));
}

struct Recorder {
  Trajectory* traj;
  void operator()(double t, const Eigen::VectorXd& y) const {
    traj->times.push_back(t);
    traj->states.push_back(y);
  }
};

}  // namespace

int FormSpec::packed_size() const {
  const int dim = 2 * n;
  switch (tag) {
    case FormTag::Base:
      return dim;
    case FormTag::NaiveUnion:
    case FormTag::Vector:
      return 2 * dim;
    case FormTag::Two:
    case FormTag::Bracket:
      return dim + n * (2 * n + 1);
    case FormTag::TwoGeneral:
      return dim + dim * dim;
    case FormTag::Multivector:
      return dim * (1 + m_plus + m_minus);
  }
  throw std::logic_error("packed_size: bad form tag");
}

Eigen::VectorXd pack_pair(const VectorFormState& s) {
  Eigen::VectorXd v(s.x.size() + s.y.size());
  v << s.x, s.y;
  return v;
}

VectorFormState unpack_pair(int n, const Eigen::VectorXd& v) {
  const int dim = 2 * n;
  if (v.size() != 2 * dim) throw std::invalid_argument("unpack_pair: bad length");
  return {v.head(dim), v.tail(dim)};
}

Eigen::VectorXd pack_two_state(const TwoState& s) {
  Eigen::VectorXd v(s.x.size() + s.m.rows() * (s.m.rows() + 1) / 2);
  v.head(s.x.size()) = s.x;
  v.tail(v.size() - s.x.size()) = moments_from_matrix(0.5 * (s.m + s.m.transpose()));
  return v;
}

TwoState unpack_two_state(int n, const Eigen::VectorXd& v) {
  const int dim = 2 * n;
  if (v.size() != dim + moment_count(n)) {
    throw std::invalid_argument("unpack_two_state: bad length");
  }
  return {v.head(dim), matrix_from_moments(n, v.tail(moment_count(n)))};
}

Eigen::VectorXd pack_two_general(const TwoState& s) {
  const Eigen::Index dim = s.m.rows();
  Eigen::VectorXd v(s.x.size() + dim * dim);
  v.head(s.x.size()) = s.x;
  for (Eigen::Index i = 0; i < dim; ++i)
    v.segment(s.x.size() + i * dim, dim) = s.m.row(i);
  return v;
}

TwoState unpack_two_general(int n, const Eigen::VectorXd& v) {
  const int dim = 2 * n;
  if (v.size() != dim + dim * dim) {
    throw std::invalid_argument("unpack_two_general: bad length");
  }
  TwoState s;
  s.x = v.head(dim);
  s.m.resize(dim, dim);
  for (int i = 0; i < dim; ++i) s.m.row(i) = v.segment(dim + i * dim, dim);
  return s;
}

Eigen::VectorXd pack_multivector(const MultiVectorState& s) {
  const Eigen::Index dim = s.x.size();
  Eigen::VectorXd v(dim * static_cast<Eigen::Index>(1 + s.ys.size() + s.zs.size()));
  v.head(dim) = s.x;
  Eigen::Index at = dim;
  for (const auto& y : s.ys) {
    v.segment(at, dim) = y;
    at += dim;
  }
  for (const auto& z : s.zs) {
    v.segment(at, dim) = z;
    at += dim;
  }
  return v;
}

MultiVectorState unpack_multivector(int n, int m_plus, int m_minus,
                                    const Eigen::VectorXd& v) {
  const int dim = 2 * n;
  if (v.size() != static_cast<Eigen::Index>(dim) * (1 + m_plus + m_minus)) {
    throw std::invalid_argument("unpack_multivector: bad length");
  }
  MultiVectorState s;
  s.x = v.head(dim);
  Eigen::Index at = dim;
  for (int i = 0; i < m_plus; ++i, at += dim) s.ys.push_back(v.segment(at, dim));
  for (int i = 0; i < m_minus; ++i, at += dim) s.zs.push_back(v.segment(at, dim));
  return s;
}

Eigen::VectorXd form_rhs(const HamiltonianModel& model, const FormSpec& form,
                         const Eigen::VectorXd& packed) {
  switch (form.tag) {
    case FormTag::Base:
      return base_rhs(model, packed);
    case FormTag::NaiveUnion: {
      const VectorFormState d = naive_union_rhs(model, unpack_pair(form.n, packed));
      return pack_pair(d);
    }
    case FormTag::Vector: {
      const VectorFormState d = vector_form_rhs(model, unpack_pair(form.n, packed));
      return pack_pair(d);
    }
    case FormTag::Two: {
      const TwoState d = two_system_rhs_general(model, unpack_two_state(form.n, packed));
      return pack_two_state(d);
    }
    case FormTag::Bracket: {
      const TwoState d = bracket_rhs(model, unpack_two_state(form.n, packed));
      return pack_two_state(d);
    }
    case FormTag::TwoGeneral: {
      const TwoState d = two_system_rhs_general(model, unpack_two_general(form.n, packed));
      return pack_two_general(d);
    }
    case FormTag::Multivector: {
      const MultiVectorState d = multivector_rhs(
          model, unpack_multivector(form.n, form.m_plus, form.m_minus, packed));
      return pack_multivector(d);
    }
  }
  throw std::logic_error("form_rhs: bad form tag");
}

namespace {

// Shared driver. Targets are times that must be hit exactly and are
// recorded; record_stride additionally samples every k-th accepted step
// (0 disables).
template <typename Rhs>
void drive(const Rhs& f, Eigen::VectorXd y, const IntegratorConfig& cfg,
           const std::vector<double>& targets, int record_stride, Trajectory* out) {
  Recorder record{out};
  double t = 0.0;
  check_finite(y);

  record(t, y);
  if (targets.empty()) return;
  const double t_final = targets.back();
  if (t_final <= 0.0) return;

  const bool adaptive = cfg.method == IntegratorConfig::Method::Adaptive45;
  long accepted = 0;

  if (!adaptive) {
    if (cfg.step <= 0.0) throw std::invalid_argument("integrate: step must be positive");
    for (double target : targets) {
      while (t < target) {
        const double remaining = target - t;
        const double h = std::min(cfg.step, remaining);
        y = rk4_step(f, y, h);
        check_finite(y);
        t = (remaining <= cfg.step) ? target : t + h;
        ++accepted;
        if (record_stride > 0 && t != target && accepted % record_stride == 0) {
          record(t, y);
        }
      }
      record(t, y);
    }
    return;
  }

  if (cfg.rtol <= 0.0 || cfg.atol <= 0.0) {
    throw std::invalid_argument("integrate: tolerances must be positive");
  }

  Eigen::VectorXd k1 = f(y);
  // Crude first-step guess; the controller settles it within a few steps.
  double h_prop = 0.01 * (y.norm() + cfg.atol) / (k1.norm() + cfg.atol);
  h_prop = std::min(std::max(h_prop, 1e-10 * t_final), 0.1 * t_final);

  const double h_floor = 1e-14 * t_final;
  Eigen::VectorXd k2, k3, k4, k5, k6, k7;

  for (double target : targets) {
    while (t < target) {
      const double remaining = target - t;
      const bool clamped = h_prop >= remaining;
      const double h = clamped ? remaining : h_prop;
      if (h < h_floor) {
        throw StepUnderflowError("integrate: adaptive step underflow at t = " +
                                 std::to_string(t));
      }

      k2 = f(y + h * (kA21 * k1));
      k3 = f(y + h * (kA31 * k1 + kA32 * k2));
      k4 = f(y + h * (kA41 * k1 + kA42 * k2 + kA43 * k3));
      k5 = f(y + h * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4));
      k6 = f(y + h * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5));
      const Eigen::VectorXd y1 =
          y + h * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
      k7 = f(y1);
      const Eigen::VectorXd y1_low =
          y + h * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 + kE7 * k7);

      const double err = error_norm(y, y1, y1 - y1_low, cfg.atol, cfg.rtol);
      if (!std::isfinite(err)) {
        // a stage blew up; retry with a much smaller step
        h_prop = 0.2 * h;
        continue;
      }
      const double factor =
          std::clamp(0.9 * std::pow(std::max(err, 1e-300), -0.2), 0.2, 5.0);

      if (err <= 1.0) {
        y = y1;
        check_finite(y);
        k1 = k7;  // first-same-as-last
        t = clamped ? target : t + h;
        ++accepted;
        if (record_stride > 0 && t != target && accepted % record_stride == 0) {
          record(t, y);
        }
        h_prop = clamped ? std::max(h_prop, h * factor) : h * factor;
      } else {
        h_prop = h * factor;
      }
    }
    record(t, y);
  }
}

}  // namespace

Trajectory integrate(const HamiltonianModel& model, const Eigen::VectorXd& packed0,
                     const FormSpec& form, const IntegratorConfig& cfg) {
  if (packed0.size() != form.packed_size()) {
    throw std::invalid_argument("integrate: state does not match form");
  }
  if (cfg.t_end < 0.0) throw std::invalid_argument("integrate: t_end must be >= 0");
  if (cfg.sample_stride < 1) throw std::invalid_argument("integrate: sample_stride >= 1");
  Trajectory traj;
  traj.form = form;
  auto f = [&](const Eigen::VectorXd& y) { return form_rhs(model, form, y); };
  const std::vector<double> targets = cfg.t_end > 0.0 ? std::vector<double>{cfg.t_end}
                                                      : std::vector<double>{};
  drive(f, packed0, cfg, targets, cfg.sample_stride, &traj);
  return traj;
}

Trajectory integrate_at(const HamiltonianModel& model, const Eigen::VectorXd& packed0,
                        const FormSpec& form, const IntegratorConfig& cfg,
                        const std::vector<double>& sample_times) {
  if (packed0.size() != form.packed_size()) {
    throw std::invalid_argument("integrate_at: state does not match form");
  }
  if (sample_times.empty()) throw std::invalid_argument("integrate_at: no sample times");
  double prev = 0.0;
  for (double tt : sample_times) {
    if (tt < prev) throw std::invalid_argument("integrate_at: times must be nondecreasing");
    prev = tt;
  }
  Trajectory traj;
  traj.form = form;
  auto f = [&](const Eigen::VectorXd& y) { return form_rhs(model, form, y); };
  // t = 0 is recorded unconditionally by the driver; drop duplicates and a
  // leading zero.
  std::vector<double> targets;
  for (double tt : sample_times) {
    if (tt > 0.0 && (targets.empty() || tt > targets.back())) targets.push_back(tt);
  }
  drive(f, packed0, cfg, targets, /*record_stride=*/0, &traj);
  return traj;
}

namespace {

double drift_of(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  const double v0 = values.front();
  double worst = 0.0;
  for (double v : values) worst = std::max(worst, std::abs(v - v0));
  return worst / std::max(1.0, std::abs(v0));
}

void add_series(InvariantReport* report, const std::string& name,
                std::vector<double> values) {
  InvariantSeries s;
  s.max_drift = drift_of(values);
  s.values = std::move(values);
  report->series[name] = std::move(s);
}

double form_energy(const HamiltonianModel& model, const FormSpec& form,
                   const Eigen::VectorXd& packed) {
  switch (form.tag) {
    case FormTag::Base:
      return model.eval_h(packed);
    case FormTag::NaiveUnion:
      // x decouples from y; H(x) is the conserved piece.
      return model.eval_h(packed.head(model.dim()));
    case FormTag::Vector: {
      const VectorFormState s = unpack_pair(form.n, packed);
      return model.eval_h(s.x) + 0.5 * s.y.dot(model.hess_h(s.x) * s.y);
    }
    case FormTag::Two:
    case FormTag::Bracket:
      return extended_energy(model, unpack_two_state(form.n, packed));
    case FormTag::TwoGeneral:
      return extended_energy(model, unpack_two_general(form.n, packed));
    case FormTag::Multivector: {
      const MultiVectorState s =
          unpack_multivector(form.n, form.m_plus, form.m_minus, packed);
      const Eigen::MatrixXd hess = model.hess_h(s.x);
      double e = model.eval_h(s.x);
      for (const auto& y : s.ys) e += 0.5 * y.dot(hess * y);
      for (const auto& z : s.zs) e -= 0.5 * z.dot(hess * z);
      return e;
    }
  }
  throw std::logic_error("form_energy: bad form tag");
}

}  // namespace

InvariantReport invariant_report(const HamiltonianModel& model, const Trajectory& traj) {
  const FormSpec& form = traj.form;
  const int n = form.n;
  const int dim = 2 * n;
  const size_t len = traj.size();
  InvariantReport report;

  std::vector<double> energy(len);
  for (size_t k = 0; k < len; ++k) energy[k] = form_energy(model, form, traj.states[k]);
  add_series(&report, "energy", std::move(energy));

  const bool two_like = form.tag == FormTag::Two || form.tag == FormTag::Bracket ||
                        form.tag == FormTag::TwoGeneral;
  if (!two_like) return report;

  const Eigen::MatrixXd j = standard_j(n);
  std::vector<std::vector<double>> cas(n, std::vector<double>(len));
  std::vector<std::vector<double>> spec_re(dim, std::vector<double>(len));
  std::vector<std::vector<double>> spec_im(dim, std::vector<double>(len));
  std::vector<double> sig_plus(len), sig_minus(len), sig_zero(len), sp_res(len);
  std::vector<double> asym_freeze;
  std::vector<std::vector<double>> asym_spec_re, asym_spec_im;

  const bool general = form.tag == FormTag::TwoGeneral;
  Eigen::MatrixXd ma0;
  if (general) {
    const TwoState s0 = unpack_two_general(n, traj.states.front());
    ma0 = 0.5 * (s0.m - s0.m.transpose());
    asym_freeze.resize(len);
    asym_spec_re.assign(dim, std::vector<double>(len));
    asym_spec_im.assign(dim, std::vector<double>(len));
  }

  for (size_t k = 0; k < len; ++k) {
    const TwoState s = general ? unpack_two_general(n, traj.states[k])
                               : unpack_two_state(n, traj.states[k]);
    const Eigen::MatrixXd phi = j * s.m;
    const Eigen::VectorXd c = general ? casimirs_newton(phi) : casimirs(phi);
    for (int i = 0; i < n; ++i) cas[i][k] = c[i];

    const Eigen::VectorXcd lam = sorted_spectrum(phi);
    for (int i = 0; i < dim; ++i) {
      spec_re[i][k] = lam[i].real();
      spec_im[i][k] = lam[i].imag();
    }

    const Eigen::MatrixXd ms = 0.5 * (s.m + s.m.transpose());
    const Signature sig = signature_of(ms);
    sig_plus[k] = sig.m_plus;
    sig_minus[k] = sig.m_minus;
    sig_zero[k] = sig.m_zero;
    sp_res[k] = sp_residual(phi);

    if (general) {
      const Eigen::MatrixXd ma = 0.5 * (s.m - s.m.transpose());
      asym_freeze[k] = (ma - ma0).norm();
      const Eigen::VectorXcd alam = sorted_spectrum(j * ma);
      for (int i = 0; i < dim; ++i) {
        asym_spec_re[i][k] = alam[i].real();
        asym_spec_im[i][k] = alam[i].imag();
      }
    }
  }

  for (int i = 0; i < n; ++i) add_series(&report, "casimir_" + std::to_string(i), std::move(cas[i]));
  for (int i = 0; i < dim; ++i) {
    add_series(&report, "spectrum_" + std::to_string(i) + "_re", std::move(spec_re[i]));
    add_series(&report, "spectrum_" + std::to_string(i) + "_im", std::move(spec_im[i]));
  }
  add_series(&report, "sig_plus", std::move(sig_plus));
  add_series(&report, "sig_minus", std::move(sig_minus));
  add_series(&report, "sig_zero", std::move(sig_zero));
  add_series(&report, "sp_residual", std::move(sp_res));
  if (general) {
    add_series(&report, "antisym_deviation", std::move(asym_freeze));
    for (int i = 0; i < dim; ++i) {
      add_series(&report, "antisym_spectrum_" + std::to_string(i) + "_re",
                 std::move(asym_spec_re[i]));
      add_series(&report, "antisym_spectrum_" + std::to_string(i) + "_im",
                 std::move(asym_spec_im[i]));
    }
  }
  return report;
}

std::string report_json(const InvariantReport& report) {
  nlohmann::ordered_json out;
  for (const auto& [name, series] : report.series) {
    nlohmann::ordered_json entry;
    entry["values"] = series.values;
    entry["max_drift"] = series.max_drift;
    out[name] = std::move(entry);
  }
  return out.dump(2) + "\n";
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> csv_columns(const FormSpec& form) {
  const int dim = 2 * form.n;
  std::vector<std::string> cols{"t"};
  for (int i = 1; i <= dim; ++i) cols.push_back("x" + std::to_string(i));
  switch (form.tag) {
    case FormTag::Base:
      break;
    case FormTag::NaiveUnion:
    case FormTag::Vector:
      for (int i = 1; i <= dim; ++i) cols.push_back("y" + std::to_string(i));
      break;
    case FormTag::Two:
    case FormTag::Bracket:
      for (int i = 1; i <= dim; ++i)
        for (int j = i; j <= dim; ++j)
          cols.push_back("M" + std::to_string(i) + std::to_string(j));
      break;
    case FormTag::Multivector:
      for (int v = 1; v <= form.m_plus; ++v)
        for (int i = 1; i <= dim; ++i)
          cols.push_back("y" + std::to_string(v) + "_" + std::to_string(i));
      for (int v = 1; v <= form.m_minus; ++v)
        for (int i = 1; i <= dim; ++i)
          cols.push_back("z" + std::to_string(v) + "_" + std::to_string(i));
      break;
    case FormTag::TwoGeneral:
      throw std::invalid_argument("csv: TwoGeneral trajectories are not exported");
  }
  return cols;
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, std::ostream& os) {
  const std::vector<std::string> cols = csv_columns(traj.form);
  for (size_t i = 0; i < cols.size(); ++i) {
    if (i) os << ',';
    os << cols[i];
  }
  os << '\n';
  for (size_t k = 0; k < traj.size(); ++k) {
    os << fmt17(traj.times[k]);
    const Eigen::VectorXd& s = traj.states[k];
    for (Eigen::Index i = 0; i < s.size(); ++i) os << ',' << fmt17(s[i]);
    os << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& is, const FormSpec& form) {
  const std::vector<std::string> expect = csv_columns(form);
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  {
    std::stringstream header(line);
    std::string col;
    size_t i = 0;
    while (std::getline(header, col, ',')) {
      if (i >= expect.size() || col != expect[i]) {
        throw std::runtime_error("csv: header does not match the expected form");
      }
      ++i;
    }
    if (i != expect.size()) throw std::runtime_error("csv: header too short");
  }

  Trajectory traj;
  traj.form = form;
  const int cols = static_cast<int>(expect.size());
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
    if (static_cast<int>(vals.size()) != cols) {
      throw std::runtime_error("csv: row width mismatch");
    }
    traj.times.push_back(vals[0]);
    Eigen::VectorXd s(cols - 1);
    for (int i = 1; i < cols; ++i) s[i - 1] = vals[static_cast<size_t>(i)];
    traj.states.push_back(std::move(s));
  }
  return traj;
}

}  // namespace twosys
