// Acceptance suite: one self-contained check per criterion, one line of
// output each, nonzero exit when anything fails.

#include "test_helpers.hpp"
#include "twosys/cli.hpp"
#include "twosys/dynamics.hpp"
#include "twosys/integrate.hpp"
#include "twosys/oracles.hpp"
#include "twosys/poisson.hpp"
#include "twosys/structure.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace twosys;

namespace {

Eigen::Vector2d v2(double a, double b) { return Eigen::Vector2d(a, b); }

IntegratorConfig adaptive(double t_end, double rtol, double atol) {
  IntegratorConfig cfg;
  cfg.method = IntegratorConfig::Method::Adaptive45;
  cfg.rtol = rtol;
  cfg.atol = atol;
  cfg.t_end = t_end;
  return cfg;
}

std::vector<double> uniform_times(double t_end, int count) {
  std::vector<double> times;
  for (int k = 0; k <= count; ++k) times.push_back(t_end * k / count);
  return times;
}

// ---------------------------------------------------------------------- 1
bool introduction_system_identity(std::string& detail) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "twosys_acceptance";
  fs::create_directories(dir);
  const int rc = cmd_example_quartic(0.1, 1.0, (dir / "ex_").string());
  detail = "cmd_example_quartic exit code " + std::to_string(rc);
  return rc == 0;
}

// ---------------------------------------------------------------------- 2
bool bracket_equivalence(std::string& detail) {
  std::mt19937 rng(101);
  double worst = 0.0;
  for (int n : {1, 2, 3}) {
    const HamiltonianModel model = testing::random_polynomial_model(rng, n);
    for (int trial = 0; trial < 1000; ++trial) {
      const TwoState s{testing::random_vector(rng, 2 * n),
                       testing::random_symmetric(rng, 2 * n)};
      const TwoState a = bracket_rhs(model, s);
      const TwoState b = two_system_rhs(model, s);
      const double scale = std::max({1.0, b.x.cwiseAbs().maxCoeff(),
                                     b.m.cwiseAbs().maxCoeff()});
      const double dev = std::max((a.x - b.x).cwiseAbs().maxCoeff(),
                                  (a.m - b.m).cwiseAbs().maxCoeff()) /
                         scale;
      worst = std::max(worst, dev);
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "max relative deviation %.3e over 3000 states", worst);
  detail = buf;
  return worst <= 1e-12;
}

// ---------------------------------------------------------------------- 3
bool omega_explicit_block(std::string& detail) {
  Eigen::VectorXd mom(3);
  mom << 1, 2, 3;
  const Eigen::MatrixXd omega = omega_matrix(v2(0, 0), mom);
  Eigen::MatrixXd expect(3, 3);
  expect << 0, 2, 8, -2, 0, 6, -8, -6, 0;
  const double dev = (omega.bottomRightCorner(3, 3) - expect).cwiseAbs().maxCoeff();
  detail = dev == 0.0 ? "omega block exact" : "omega block deviates by " + std::to_string(dev);
  return dev == 0.0;
}

// ---------------------------------------------------------------------- 4
bool conservation_suite(std::string& detail) {
  const HamiltonianModel quartic = HamiltonianModel::quartic(0.1);
  IntegratorConfig cfg = adaptive(100.0, 1e-10, 1e-12);
  cfg.sample_stride = 10;
  const Trajectory traj = integrate(
      quartic, pack_two_state({v2(1, 0), Eigen::MatrixXd::Identity(2, 2)}),
      FormSpec::two(1), cfg);
  const InvariantReport report = invariant_report(quartic, traj);

  const double energy = report.series.at("energy").max_drift;
  const double casimir = report.series.at("casimir_0").max_drift;
  double spectrum = 0.0;
  for (int i = 0; i < 2; ++i) {
    spectrum = std::max(spectrum,
                        report.series.at("spectrum_" + std::to_string(i) + "_re").max_drift);
    spectrum = std::max(spectrum,
                        report.series.at("spectrum_" + std::to_string(i) + "_im").max_drift);
  }
  const double signature = report.series.at("sig_plus").max_drift +
                           report.series.at("sig_minus").max_drift +
                           report.series.at("sig_zero").max_drift;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "drifts over t in [0,100]: energy %.2e, casimir %.2e, spectrum %.2e, "
                "signature %.0f",
                energy, casimir, spectrum, signature);
  detail = buf;
  return energy <= 1e-8 && casimir <= 1e-8 && spectrum <= 1e-8 && signature == 0.0;
}

// ---------------------------------------------------------------------- 5
bool signature_invariance(std::string& detail) {
  const HamiltonianModel quartic = HamiltonianModel::quartic(0.1);
  std::mt19937 rng(202);
  // tight tolerances keep the zero eigenvalues of rank-deficient classes
  // well inside the default signature band
  IntegratorConfig cfg = adaptive(20.0, 1e-12, 1e-14);
  cfg.sample_stride = 25;

  struct Class {
    Signature expect;
    std::function<Eigen::MatrixXd()> draw;
  };
  const std::vector<Class> classes = {
      {{2, 0, 0},
       [&]() {
         const Eigen::MatrixXd a = testing::random_matrix(rng, 2, 2);
         return Eigen::MatrixXd(a * a.transpose() + 0.1 * Eigen::MatrixXd::Identity(2, 2));
       }},
      {{1, 1, 0},
       [&]() {
         Eigen::MatrixXd m(2, 2);
         do {
           const Eigen::VectorXd y = testing::random_vector(rng, 2, 0.4, 1.5);
           const Eigen::VectorXd z = testing::random_vector(rng, 2, 0.4, 1.5);
           m = y * y.transpose() - z * z.transpose();
         } while (!(signature_of(m) == Signature{1, 1, 0}));
         return m;
       }},
      {{1, 0, 1},
       [&]() {
         const Eigen::VectorXd y = testing::random_vector(rng, 2, 0.4, 1.5);
         return Eigen::MatrixXd(y * y.transpose());
       }},
      {{0, 0, 2}, [&]() { return Eigen::MatrixXd::Zero(2, 2).eval(); }},
  };

  int runs = 0;
  for (const auto& cls : classes) {
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::MatrixXd m0 = cls.draw();
      const Eigen::VectorXd x0 = testing::random_vector(rng, 2, -1.2, 1.2);
      const Trajectory traj =
          integrate(quartic, pack_two_state({x0, m0}), FormSpec::two(1), cfg);
      ++runs;
      for (const auto& s : traj.states) {
        const TwoState st = unpack_two_state(1, s);
        if (!(signature_of(st.m) == cls.expect)) {
          char buf[128];
          std::snprintf(buf, sizeof(buf),
                        "signature changed in class (%d,%d) after %d runs", cls.expect.m_plus,
                        cls.expect.m_minus, runs);
          detail = buf;
          return false;
        }
      }
    }
  }
  detail = "signature constant along all 80 trajectories";
  return true;
}

// ---------------------------------------------------------------------- 6
bool multivector_projection(std::string& detail) {
  const HamiltonianModel quartic = HamiltonianModel::quartic(0.1);
  const IntegratorConfig cfg = adaptive(10.0, 1e-12, 1e-14);
  const std::vector<double> times = uniform_times(10.0, 50);

  std::vector<std::pair<std::string, Eigen::MatrixXd>> cases;
  {
    const Eigen::VectorXd y = v2(1.0, 0.3);
    cases.emplace_back("(1,0)", y * y.transpose());
    Eigen::MatrixXd a(2, 2);
    a << 1.0, 0.2, 0.1, 0.8;
    cases.emplace_back("(2,0)", a * a.transpose());
    const Eigen::VectorXd yy = v2(1.0, 0.1);
    const Eigen::VectorXd zz = v2(0.2, 0.9);
    cases.emplace_back("(1,1)", yy * yy.transpose() - zz * zz.transpose());
  }

  double worst = 0.0;
  for (const auto& [name, m0] : cases) {
    const Eigen::VectorXd x0 = v2(1, 0);
    auto [ys, zs] = decompose_signature(m0);
    const MultiVectorState mv0{x0, ys, zs};
    const FormSpec mv_form =
        FormSpec::multivector(1, static_cast<int>(ys.size()), static_cast<int>(zs.size()));

    const Trajectory two =
        integrate_at(quartic, pack_two_state({x0, m0}), FormSpec::two(1), cfg, times);
    const Trajectory multi =
        integrate_at(quartic, pack_multivector(mv0), mv_form, cfg, times);

    for (size_t k = 0; k < times.size(); ++k) {
      const TwoState st = unpack_two_state(1, two.states[k]);
      const MultiVectorState ms =
          unpack_multivector(1, mv_form.m_plus, mv_form.m_minus, multi.states[k]);
      worst = std::max(worst, (st.x - ms.x).cwiseAbs().maxCoeff());
      worst = std::max(worst,
                       (compose(ms.ys, ms.zs, 2) - st.m).cwiseAbs().maxCoeff());
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "max x/M deviation %.3e across signatures", worst);
  detail = buf;
  return worst <= 1e-8;
}

// ---------------------------------------------------------------------- 7
bool quadratic_oracle(std::string& detail) {
  std::mt19937 rng(303);
  const std::vector<double> times = uniform_times(10.0, 20);
  double worst = 0.0;

  for (int n : {1, 2}) {
    for (int trial = 0; trial < 5; ++trial) {
      QuadraticModel qm;
      Eigen::MatrixXd s = testing::random_symmetric(rng, 2 * n);
      qm.s = 0.2 * s / std::max(1.0, s.operatorNorm());
      qm.b = 0.3 * testing::random_vector(rng, 2 * n);
      qm.c = 0.0;
      const HamiltonianModel model = qm.to_model();
      const Eigen::VectorXd x0 = testing::random_vector(rng, 2 * n);
      const Eigen::MatrixXd m0 = testing::random_symmetric(rng, 2 * n);
      const Eigen::MatrixXd phi0 = standard_j(n) * m0;

      const Trajectory traj = integrate_at(model, pack_two_state({x0, m0}),
                                           FormSpec::two(n), adaptive(10, 1e-12, 1e-14),
                                           times);
      for (size_t k = 0; k < times.size(); ++k) {
        const TwoState ref = quadratic_closed_form(qm, x0, phi0, times[k]);
        const TwoState num = unpack_two_state(n, traj.states[k]);
        worst = std::max(worst, (num.x - ref.x).cwiseAbs().maxCoeff());
        worst = std::max(worst, (num.m - ref.m).cwiseAbs().maxCoeff());
      }
    }
  }

  // x(t) must not react to phi0
  double x_dev = 0.0;
  {
    QuadraticModel qm;
    Eigen::MatrixXd s = testing::random_symmetric(rng, 2);
    qm.s = 0.2 * s / std::max(1.0, s.operatorNorm());
    qm.b = v2(0.1, -0.2);
    qm.c = 0.0;
    const HamiltonianModel model = qm.to_model();
    const Eigen::VectorXd x0 = v2(0.7, -0.5);
    const Trajectory a = integrate_at(model,
                                      pack_two_state({x0, Eigen::MatrixXd::Zero(2, 2)}),
                                      FormSpec::two(1), adaptive(10, 1e-12, 1e-14), times);
    const Trajectory b = integrate_at(
        model, pack_two_state({x0, testing::random_symmetric(rng, 2)}), FormSpec::two(1),
        adaptive(10, 1e-12, 1e-14), times);
    for (size_t k = 0; k < times.size(); ++k) {
      x_dev = std::max(x_dev,
                       (a.states[k].head(2) - b.states[k].head(2)).cwiseAbs().maxCoeff());
    }
  }

  char buf[128];
  std::snprintf(buf, sizeof(buf), "closed-form deviation %.3e; x-reaction to phi0 %.3e",
                worst, x_dev);
  detail = buf;
  return worst <= 1e-8 && x_dev <= 1e-9;
}

// ---------------------------------------------------------------------- 8
bool action_angle_oracle(std::string& detail) {
  const ActionAngleModel am{{0.0, 0.4, 0.25, 0.05}};
  const ActionAngleState s0{0.8, 0.3, 1.2, 0.7, -0.5};
  const double t_end = 2.0;
  const double w1 = am.h1(s0.action) + am.h3(s0.action) * s0.alpha;
  const double w2 = am.h2(s0.action);

  // substitute the closed form into the printed system
  double residual = 0.0, scale = 1.0;
  for (int k = 0; k <= 100; ++k) {
    const double t = t_end * k / 100;
    const ActionAngleState s = action_angle_closed_form(am, s0, t);
    const ActionAngleState rhs = action_angle_rhs(am, s);
    const double growth = std::exp(w2 * t);
    residual = std::max({residual, std::abs(w1 - rhs.angle),
                         std::abs(s0.beta * w2 * growth - rhs.beta),
                         std::abs(2.0 * s0.beta * w2 * growth - rhs.gamma)});
    scale = std::max({scale, std::abs(rhs.angle), std::abs(rhs.beta), std::abs(rhs.gamma)});
  }

  // informational: the two-system driven directly by H = H(I)
  const HamiltonianModel model = action_angle_model(am);
  Eigen::MatrixXd m0(2, 2);
  m0 << s0.alpha, s0.beta, s0.beta, s0.gamma;
  const std::vector<double> times = uniform_times(t_end, 40);
  const Trajectory traj = integrate_at(
      model, pack_two_state({v2(s0.action, s0.angle), m0}), FormSpec::two(1),
      adaptive(t_end, 1e-12, 1e-14), times);
  double dev_linear = 0.0, dev_printed = 0.0;
  for (size_t k = 0; k < times.size(); ++k) {
    const double beta = unpack_two_state(1, traj.states[k]).m(0, 1);
    dev_linear = std::max(dev_linear,
                          std::abs(beta - (s0.beta - w2 * s0.alpha * times[k])));
    dev_printed = std::max(dev_printed, std::abs(beta - s0.beta * std::exp(w2 * times[k])));
  }
  char buf[224];
  std::snprintf(buf, sizeof(buf),
                "printed-system residual %.3e; direct run beta is linear-in-t "
                "(dev %.3e) not exponential (dev %.3e) [informational]",
                residual, dev_linear, dev_printed);
  detail = buf;
  return residual <= 1e-12 * scale;
}

// ---------------------------------------------------------------------- 9
bool special_solutions(std::string& detail) {
  const HamiltonianModel quartic = HamiltonianModel::quartic(0.1);
  const std::vector<double> times = uniform_times(10.0, 20);

  // (i) phi(0) = 0
  const Trajectory run = integrate_at(
      quartic, pack_two_state({v2(1, 0), Eigen::MatrixXd::Zero(2, 2)}), FormSpec::two(1),
      adaptive(10, 1e-10, 1e-12), times);
  const Trajectory base = integrate_at(quartic, v2(1, 0), FormSpec::base(1),
                                       adaptive(10, 1e-12, 1e-14), times);
  double phi_norm = 0.0, x_dev = 0.0;
  for (size_t k = 0; k < times.size(); ++k) {
    phi_norm = std::max(phi_norm, run.states[k].tail(3).norm());
    x_dev = std::max(x_dev,
                     (run.states[k].head(2) - base.states[k]).cwiseAbs().maxCoeff());
  }

  // (ii) stationary point with vanishing third derivatives
  Eigen::MatrixXd m0(2, 2);
  m0 << 4, 1, 1, 1;
  const Trajectory stat = integrate_at(quartic, pack_two_state({v2(0, 0), m0}),
                                       FormSpec::two(1), adaptive(10, 1e-12, 1e-14), times);
  double stat_dev = 0.0;
  for (size_t k = 0; k < times.size(); ++k) {
    const TwoState ref = stationary_point_solution(quartic, v2(0, 0),
                                                   standard_j(1) * m0, times[k]);
    const TwoState num = unpack_two_state(1, stat.states[k]);
    stat_dev = std::max(stat_dev, (num.m - ref.m).cwiseAbs().maxCoeff());
    stat_dev = std::max(stat_dev, num.x.cwiseAbs().maxCoeff());
  }

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "|phi| stays %.1e; x-deviation %.3e; stationary deviation %.3e", phi_norm,
                x_dev, stat_dev);
  detail = buf;
  return phi_norm == 0.0 && x_dev <= 1e-9 && stat_dev <= 1e-9;
}

// --------------------------------------------------------------------- 10
bool hamiltonicity_defect_check(std::string& detail) {
  std::mt19937 rng(404);
  Eigen::MatrixXd s = testing::random_symmetric(rng, 2);
  const HamiltonianModel quad = HamiltonianModel::quadratic(s, v2(0.2, -0.1), 0.3);
  const VectorFormState at{testing::random_vector(rng, 2), testing::random_vector(rng, 2)};
  const double quad_defect = hamiltonicity_defect(quad, at);

  const HamiltonianModel quartic = HamiltonianModel::quartic(0.1);
  const double quartic_defect = hamiltonicity_defect(quartic, {v2(1, 0), v2(1, 0)});

  char buf[96];
  std::snprintf(buf, sizeof(buf), "quadratic defect %.2e, quartic defect %.3f",
                quad_defect, quartic_defect);
  detail = buf;
  return quad_defect <= 1e-6 && quartic_defect > 1e-2;
}

// --------------------------------------------------------------------- 11
bool split_evolution(std::string& detail) {
  std::mt19937 rng(505);
  double worst = 0.0;
  for (int n : {1, 2}) {
    const HamiltonianModel model = testing::random_polynomial_model(rng, n);
    for (int trial = 0; trial < 50; ++trial) {
      const Eigen::VectorXd x = testing::random_vector(rng, 2 * n);
      const Eigen::MatrixXd m = testing::random_matrix(rng, 2 * n, 2 * n);
      auto [ms, ma] = split_sym_antisym(m);

      const Eigen::MatrixXd dm = moment_rhs(model, x, m);
      auto [dm_s, dm_a] = split_sym_antisym(dm);
      const double scale = std::max(1.0, dm.norm());
      worst = std::max(worst, (dm_s - moment_rhs(model, x, ms)).norm() / scale);
      worst = std::max(worst, (dm_a - moment_rhs(model, x, ma)).norm() / scale);

      // x' ignores the antisymmetric part
      const Eigen::MatrixXd ma2 = split_sym_antisym(testing::random_matrix(rng, 2 * n, 2 * n)).second;
      const TwoState d1 = two_system_rhs_general(model, {x, ms + ma});
      const TwoState d2 = two_system_rhs_general(model, {x, ms + ma2});
      worst = std::max(worst, (d1.x - d2.x).norm() / std::max(1.0, d1.x.norm()));
    }
  }

  // n = 1: the commutator on the antisymmetric part vanishes identically
  double frozen = 0.0;
  const HamiltonianModel quartic = HamiltonianModel::quartic(0.1);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXd ma(2, 2);
    const double c = testing::random_vector(rng, 1)[0];
    ma << 0, c, -c, 0;
    frozen = std::max(frozen,
                      moment_rhs(quartic, testing::random_vector(rng, 2), ma).norm());
  }

  char buf[96];
  std::snprintf(buf, sizeof(buf), "split residual %.2e; n=1 antisym rate %.1e", worst,
                frozen);
  detail = buf;
  return worst <= 1e-12 && frozen == 0.0;
}

// --------------------------------------------------------------------- 12
bool poisson_axioms(std::string& detail) {
  std::mt19937 rng(606);
  double jacobi_worst = 0.0, leibniz_worst = 0.0, kernel_worst = 0.0;
  bool antisym_ok = true, corank_ok = true;

  for (int n : {1, 2}) {
    const int dim = 2 * n;
    const int nm = moment_count(n);
    const int total = dim + nm;

    // chart derivative tensors (exact: the tensor is linear in the moments)
    std::vector<Eigen::MatrixXd> domega(static_cast<size_t>(total),
                                        Eigen::MatrixXd::Zero(total, total));
    const Eigen::MatrixXd omega0 =
        omega_matrix(Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Zero(nm));
    for (int a = 0; a < nm; ++a) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(nm);
      e[a] = 1.0;
      domega[static_cast<size_t>(dim + a)] =
          omega_matrix(Eigen::VectorXd::Zero(dim), e) - omega0;
    }

    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::VectorXd mom =
          moments_from_matrix(testing::random_symmetric(rng, dim));
      const Eigen::VectorXd x = testing::random_vector(rng, dim);
      const Eigen::MatrixXd omega = omega_matrix(x, mom);
      const double scale = std::max(1.0, omega.cwiseAbs().maxCoeff());

      antisym_ok = antisym_ok && (omega + omega.transpose()).norm() == 0.0;
      corank_ok = corank_ok && (total - numerical_rank(omega)) == n;

      if (trial < 10) {
        for (int u = 0; u < total; ++u) {
          for (int v = u + 1; v < total; ++v) {
            for (int w = v + 1; w < total; ++w) {
              double sum = 0.0;
              for (int a = 0; a < total; ++a) {
                sum += domega[static_cast<size_t>(a)](u, v) * omega(a, w);
                sum += domega[static_cast<size_t>(a)](v, w) * omega(a, u);
                sum += domega[static_cast<size_t>(a)](w, u) * omega(a, v);
              }
              jacobi_worst = std::max(jacobi_worst, std::abs(sum) / (scale * scale));
            }
          }
        }

        // Leibniz on sampled quadratic coordinate products
        std::uniform_int_distribution<int> pick(0, total - 1);
        Eigen::VectorXd point(total);
        point << x, mom;
        for (int rep = 0; rep < 20; ++rep) {
          const int a = pick(rng), b = pick(rng), c = pick(rng), d = pick(rng);
          Eigen::VectorXd ga = Eigen::VectorXd::Zero(total);
          Eigen::VectorXd gb = Eigen::VectorXd::Zero(total);
          Eigen::VectorXd gc = Eigen::VectorXd::Zero(total);
          Eigen::VectorXd gd = Eigen::VectorXd::Zero(total);
          ga[a] = gb[b] = gc[c] = gd[d] = 1.0;
          const double f = point[a] * point[b];
          const double g = point[c];
          const Eigen::VectorXd gf = point[a] * gb + point[b] * ga;
          const Eigen::VectorXd gfg = f * gc + g * gf;
          const double lhs = gfg.dot(omega * gd);
          const double rhs = f * gc.dot(omega * gd) + g * gf.dot(omega * gd);
          leibniz_worst = std::max(leibniz_worst, std::abs(lhs - rhs) / scale);
        }
      }

      const Eigen::MatrixXd grads = casimir_gradients(n, mom);
      const double gscale = std::max(1.0, grads.cwiseAbs().maxCoeff());
      kernel_worst = std::max(kernel_worst, casimir_kernel_check(x, mom) / gscale);
    }
  }

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "antisym %s; corank %s; jacobi %.1e; leibniz %.1e; kernel %.1e",
                antisym_ok ? "exact" : "BROKEN", corank_ok ? "= n" : "WRONG", jacobi_worst,
                leibniz_worst, kernel_worst);
  detail = buf;
  return antisym_ok && corank_ok && jacobi_worst <= 1e-10 && leibniz_worst <= 1e-10 &&
         kernel_worst <= 1e-10;
}

// --------------------------------------------------------------------- 13
bool gradient_identities(std::string& detail) {
  std::mt19937 rng(707);
  const Eigen::MatrixXd phi =
      testing::random_matrix(rng, 4, 4) + 2.0 * Eigen::MatrixXd::Identity(4, 4);
  const Eigen::MatrixXd dir = testing::random_matrix(rng, 4, 4);

  const double exact_det = grad_phi_det(phi).cwiseProduct(dir).sum();
  std::vector<double> det_errs;
  const Eigen::MatrixXd a = testing::random_matrix(rng, 4, 4);
  const Eigen::MatrixXd ga = grad_phi_trace(a);
  double trace_err = 0.0;
  for (double h : {1e-3, 1e-4, 1e-5}) {
    const double fd =
        ((phi + h * dir).determinant() - (phi - h * dir).determinant()) / (2 * h);
    det_errs.push_back(std::abs(fd - exact_det));
    const double fd_tr = (((phi + h * dir) * a).trace() - ((phi - h * dir) * a).trace()) /
                         (2 * h);
    trace_err = std::max(trace_err,
                         std::abs(fd_tr - ga.cwiseProduct(dir).sum()));
  }
  const double r01 = det_errs[0] / det_errs[1];
  const double r12 = det_errs[1] / det_errs[2];
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "det FD errors %.1e / %.1e / %.1e (ratios %.0f, %.0f); trace FD error %.1e",
                det_errs[0], det_errs[1], det_errs[2], r01, r12, trace_err);
  detail = buf;
  // the last step may run into the roundoff floor, so only require the
  // error to keep falling at a quadratic-or-better rate
  return r01 > 25.0 && r01 < 400.0 && r12 > 20.0 && trace_err <= 1e-9;
}

// --------------------------------------------------------------------- 14
bool numerics_sanity(std::string& detail) {
  const HamiltonianModel harmonic =
      HamiltonianModel::polynomial(1, {{0.5, {2, 0}}, {0.5, {0, 2}}});
  std::vector<double> rk_errs;
  for (double h : {1e-2, 5e-3, 2.5e-3}) {
    IntegratorConfig cfg;
    cfg.method = IntegratorConfig::Method::Rk4;
    cfg.step = h;
    cfg.t_end = 2.0 * std::numbers::pi;
    cfg.sample_stride = 1 << 30;
    const Trajectory traj = integrate(harmonic, v2(1, 0), FormSpec::base(1), cfg);
    rk_errs.push_back((traj.states.back() - v2(1, 0)).norm());
  }
  const double rk_r01 = rk_errs[0] / rk_errs[1];
  const double rk_r12 = rk_errs[1] / rk_errs[2];

  const HamiltonianModel model = HamiltonianModel::polynomial(
      1, {{1.0, {5, 0}}, {1.0, {3, 2}}, {0.5, {2, 0}}, {0.5, {0, 2}}});
  const Eigen::VectorXd x = v2(0.7, 0.4);
  std::vector<double> fd_errs;
  for (double h : {1e-3, 1e-4, 1e-5}) {
    double worst = 0.0;
    for (int k = 0; k < 2; ++k) {
      Eigen::VectorXd xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      const double fd = (model.eval_h(xp) - model.eval_h(xm)) / (2 * h);
      worst = std::max(worst, std::abs(fd - model.grad_h(x)[k]));
    }
    fd_errs.push_back(worst);
  }
  const double fd_r01 = fd_errs[0] / fd_errs[1];
  const double fd_r12 = fd_errs[1] / fd_errs[2];

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "rk4 error ratios %.1f, %.1f (want ~16); derivative FD ratios %.0f, %.0f "
                "(want ~100)",
                rk_r01, rk_r12, fd_r01, fd_r12);
  detail = buf;
  return rk_r01 > 8.0 && rk_r01 < 30.0 && rk_r12 > 8.0 && rk_r12 < 30.0 && fd_r01 > 25.0 &&
         fd_r01 < 400.0 && fd_r12 > 20.0 && fd_r12 < 500.0;
}

struct Criterion {
  const char* name;
  bool (*run)(std::string&);
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"introduction-system identity (1000 random states, <= 1e-12)",
       introduction_system_identity},
      {"bracket form equals two-system form (n = 1..3, <= 1e-12)", bracket_equivalence},
      {"explicit omega block at (alpha,beta,gamma) = (1,2,3)", omega_explicit_block},
      {"conservation suite on the quartic over t in [0,100]", conservation_suite},
      {"signature invariance in all four n = 1 classes", signature_invariance},
      {"multivector projection matches the two-system (<= 1e-8)", multivector_projection},
      {"quadratic closed form (<= 1e-8) and phi0-independence (<= 1e-9)",
       quadratic_oracle},
      {"action-angle closed form satisfies the printed system (<= 1e-12)",
       action_angle_oracle},
      {"special solutions: phi = 0 and stationary point (<= 1e-9)", special_solutions},
      {"hamiltonicity defect: 0 for quadratic, > 1e-2 for quartic",
       hamiltonicity_defect_check},
      {"symmetric/antisymmetric moment split (<= 1e-12)", split_evolution},
      {"poisson axioms, corank, and casimir kernel (<= 1e-10)", poisson_axioms},
      {"gradient identities vs finite differences (second order)", gradient_identities},
      {"rk4 fourth-order and derivative second-order convergence", numerics_sanity},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    std::string detail;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
      ok = criteria[i].run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %02zu %s — %s (%.2fs)\n", ok ? "PASS" : "FAIL", i + 1,
                criteria[i].name, detail.c_str(), secs);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  if (failures == 0) {
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
  } else {
    std::printf("%d acceptance criteria FAILED\n", failures);
  }
  return failures == 0 ? 0 : 1;
}
