#include "twosys/config.hpp"

#include "twosys/errors.hpp"
#include "twosys/poisson.hpp"
#include "twosys/structure.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace twosys {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for '" + key + "': " + v);
  }
}

int parse_int(const std::string& v, const std::string& key) {
  try {
    size_t used = 0;
    const int i = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ConfigError("bad integer value for '" + key + "': " + v);
  }
}

std::vector<double> parse_vector(const std::string& v, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string tok;
  while (ss >> tok) out.push_back(parse_double(tok, key));
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt(const std::vector<double>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += fmt(v[i]);
  }
  return out;
}

const std::vector<std::string> kForms = {"base", "variational", "vector",
                                         "two",  "multivector", "bracket"};

bool valid_form(const std::string& f) {
  for (const auto& k : kForms) {
    if (k == f) return true;
  }
  return false;
}

}  // namespace

bool RunConfig::operator==(const RunConfig& o) const {
  return model_kind == o.model_kind && epsilon == o.epsilon && model_file == o.model_file &&
         n == o.n && form == o.form && integ.method == o.integ.method &&
         integ.step == o.integ.step && integ.rtol == o.integ.rtol &&
         integ.atol == o.integ.atol && integ.t_end == o.integ.t_end &&
         integ.sample_stride == o.integ.sample_stride && x0 == o.x0 && m0 == o.m0 &&
         ys0 == o.ys0 && zs0 == o.zs0 && trajectory_path == o.trajectory_path &&
         report_path == o.report_path && form_b == o.form_b &&
         checkpoints == o.checkpoints && compare_tol == o.compare_tol &&
         oracle_case == o.oracle_case && h_coeffs == o.h_coeffs &&
         oracle_tol == o.oracle_tol && sp_tol == o.sp_tol &&
         signature_tol == o.signature_tol && rank_tol == o.rank_tol;
}

RunConfig parse_config(std::istream& is) {
  RunConfig c;
  std::string line, section;
  int lineno = 0;
  std::map<int, std::vector<double>> ys, zs;

  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    const std::string where = section + "." + key;

    if (section == "model") {
      if (key == "kind") {
        if (val == "quartic") {
          c.model_kind = RunConfig::ModelKind::Quartic;
        } else if (val == "polynomial") {
          c.model_kind = RunConfig::ModelKind::PolynomialFile;
        } else {
          throw ConfigError("unknown model kind: " + val);
        }
      } else if (key == "epsilon") {
        c.epsilon = parse_double(val, where);
      } else if (key == "file") {
        c.model_file = val;
      } else if (key == "n") {
        c.n = parse_int(val, where);
      } else {
        throw ConfigError("unknown key: " + where);
      }
    } else if (section == "run") {
      if (key == "form") {
        if (!valid_form(val)) throw ConfigError("unknown form: " + val);
        c.form = val;
      } else if (key == "method") {
        if (val == "adaptive") {
          c.integ.method = IntegratorConfig::Method::Adaptive45;
        } else if (val == "rk4") {
          c.integ.method = IntegratorConfig::Method::Rk4;
        } else {
          throw ConfigError("unknown method: " + val);
        }
      } else if (key == "step") {
        c.integ.step = parse_double(val, where);
      } else if (key == "rtol") {
        c.integ.rtol = parse_double(val, where);
      } else if (key == "atol") {
        c.integ.atol = parse_double(val, where);
      } else if (key == "t_end") {
        c.integ.t_end = parse_double(val, where);
      } else if (key == "sample_stride") {
        c.integ.sample_stride = parse_int(val, where);
      } else {
        throw ConfigError("unknown key: " + where);
      }
    } else if (section == "initial") {
      if (key == "x") {
        c.x0 = parse_vector(val, where);
      } else if (key == "m") {
        c.m0 = parse_vector(val, where);
      } else if (key.size() > 1 && (key[0] == 'y' || key[0] == 'z')) {
        const int idx = parse_int(key.substr(1), where);
        if (idx < 1) throw ConfigError("bad vector index in " + where);
        (key[0] == 'y' ? ys : zs)[idx] = parse_vector(val, where);
      } else {
        throw ConfigError("unknown key: " + where);
      }
    } else if (section == "output") {
      if (key == "trajectory") {
        c.trajectory_path = val;
      } else if (key == "report") {
        c.report_path = val;
      } else {
        throw ConfigError("unknown key: " + where);
      }
    } else if (section == "compare") {
      if (key == "form_b") {
        if (!valid_form(val)) throw ConfigError("unknown form: " + val);
        c.form_b = val;
      } else if (key == "checkpoints") {
        c.checkpoints = parse_int(val, where);
      } else if (key == "tolerance") {
        c.compare_tol = parse_double(val, where);
      } else {
        throw ConfigError("unknown key: " + where);
      }
    } else if (section == "oracle") {
      if (key == "case") {
        c.oracle_case = val;
      } else if (key == "h_coeffs") {
        c.h_coeffs = parse_vector(val, where);
      } else if (key == "tolerance") {
        c.oracle_tol = parse_double(val, where);
      } else {
        throw ConfigError("unknown key: " + where);
      }
    } else if (section == "tolerances") {
      if (key == "sp_residual") {
        c.sp_tol = parse_double(val, where);
      } else if (key == "signature_zero") {
        c.signature_tol = parse_double(val, where);
      } else if (key == "rank") {
        c.rank_tol = parse_double(val, where);
      } else {
        throw ConfigError("unknown key: " + where);
      }
    } else {
      throw ConfigError("unknown section: [" + section + "]");
    }
  }

  for (auto& [idx, v] : ys) c.ys0.push_back(std::move(v));
  for (auto& [idx, v] : zs) c.zs0.push_back(std::move(v));

  // Cross-field validation.
  if (c.n < 1) throw ConfigError("model.n must be >= 1");
  if (c.integ.t_end < 0.0) throw ConfigError("run.t_end must be >= 0");
  if (c.integ.step <= 0.0) throw ConfigError("run.step must be positive");
  if (c.integ.rtol <= 0.0 || c.integ.atol <= 0.0) {
    throw ConfigError("run tolerances must be positive");
  }
  if (c.integ.sample_stride < 1) throw ConfigError("run.sample_stride must be >= 1");
  const int dim = 2 * c.n;
  if (!c.x0.empty() && static_cast<int>(c.x0.size()) != dim) {
    throw ConfigError("initial.x must have length 2n");
  }
  if (!c.m0.empty()) {
    const int nm = dim * (dim + 1) / 2;
    if (static_cast<int>(c.m0.size()) != nm && static_cast<int>(c.m0.size()) != dim * dim) {
      throw ConfigError("initial.m must list the upper triangle (n(2n+1) values) or the full matrix (4n^2 values)");
    }
  }
  for (const auto& v : c.ys0) {
    if (static_cast<int>(v.size()) != dim) throw ConfigError("initial y vectors must have length 2n");
  }
  for (const auto& v : c.zs0) {
    if (static_cast<int>(v.size()) != dim) throw ConfigError("initial z vectors must have length 2n");
  }
  initial_moment_matrix(c);  // validates symmetry of a full m
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  return parse_config(is);
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  os << "[model]\n";
  os << "kind = " << (c.model_kind == RunConfig::ModelKind::Quartic ? "quartic" : "polynomial") << "\n";
  os << "epsilon = " << fmt(c.epsilon) << "\n";
  if (!c.model_file.empty()) os << "file = " << c.model_file << "\n";
  os << "n = " << c.n << "\n";

  os << "\n[run]\n";
  os << "form = " << c.form << "\n";
  os << "method = "
     << (c.integ.method == IntegratorConfig::Method::Adaptive45 ? "adaptive" : "rk4")
     << "\n";
  os << "step = " << fmt(c.integ.step) << "\n";
  os << "rtol = " << fmt(c.integ.rtol) << "\n";
  os << "atol = " << fmt(c.integ.atol) << "\n";
  os << "t_end = " << fmt(c.integ.t_end) << "\n";
  os << "sample_stride = " << c.integ.sample_stride << "\n";

  os << "\n[initial]\n";
  if (!c.x0.empty()) os << "x = " << fmt(c.x0) << "\n";
  if (!c.m0.empty()) os << "m = " << fmt(c.m0) << "\n";
  for (size_t i = 0; i < c.ys0.size(); ++i)
    os << "y" << (i + 1) << " = " << fmt(c.ys0[i]) << "\n";
  for (size_t i = 0; i < c.zs0.size(); ++i)
    os << "z" << (i + 1) << " = " << fmt(c.zs0[i]) << "\n";

  os << "\n[output]\n";
  os << "trajectory = " << c.trajectory_path << "\n";
  os << "report = " << c.report_path << "\n";

  os << "\n[compare]\n";
  if (!c.form_b.empty()) os << "form_b = " << c.form_b << "\n";
  os << "checkpoints = " << c.checkpoints << "\n";
  os << "tolerance = " << fmt(c.compare_tol) << "\n";

  os << "\n[oracle]\n";
  if (!c.oracle_case.empty()) os << "case = " << c.oracle_case << "\n";
  if (!c.h_coeffs.empty()) os << "h_coeffs = " << fmt(c.h_coeffs) << "\n";
  os << "tolerance = " << fmt(c.oracle_tol) << "\n";

  os << "\n[tolerances]\n";
  os << "sp_residual = " << fmt(c.sp_tol) << "\n";
  os << "signature_zero = " << fmt(c.signature_tol) << "\n";
  os << "rank = " << fmt(c.rank_tol) << "\n";
  return os.str();
}

std::vector<MonomialTerm> parse_polynomial_terms(std::istream& is, int expected_dim) {
  std::vector<MonomialTerm> terms;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::stringstream ss(line);
    MonomialTerm t;
    if (!(ss >> t.coeff)) {
      throw ConfigError("model file line " + std::to_string(lineno) + ": bad coefficient");
    }
    int e;
    while (ss >> e) {
      if (e < 0) throw ConfigError("model file line " + std::to_string(lineno) + ": negative exponent");
      t.exponents.push_back(e);
    }
    if (!ss.eof()) {
      throw ConfigError("model file line " + std::to_string(lineno) + ": bad exponent");
    }
    if (static_cast<int>(t.exponents.size()) != expected_dim) {
      throw ConfigError("model file line " + std::to_string(lineno) + ": expected " +
                        std::to_string(expected_dim) + " exponents");
    }
    terms.push_back(std::move(t));
  }
  return terms;
}

HamiltonianModel model_from_config(const RunConfig& c) {
  if (c.model_kind == RunConfig::ModelKind::Quartic) {
    if (c.n != 1) throw ConfigError("the quartic built-in has n = 1");
    return HamiltonianModel::quartic(c.epsilon);
  }
  std::ifstream is(c.model_file);
  if (!is) throw ConfigError("cannot open model file: " + c.model_file);
  return HamiltonianModel::polynomial(c.n, parse_polynomial_terms(is, 2 * c.n));
}

Eigen::MatrixXd initial_moment_matrix(const RunConfig& c) {
  const int dim = 2 * c.n;
  if (!c.m0.empty()) {
    if (static_cast<int>(c.m0.size()) == dim * (dim + 1) / 2) {
      Eigen::VectorXd moments(c.m0.size());
      for (size_t i = 0; i < c.m0.size(); ++i) moments[static_cast<Eigen::Index>(i)] = c.m0[i];
      return matrix_from_moments(c.n, moments);
    }
    Eigen::MatrixXd m(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m(i, j) = c.m0[static_cast<size_t>(i * dim + j)];
    // for phi = J M the sp residual is 2 |M - M^t| / 2, so this is the
    // sp-membership gate
    if ((m - m.transpose()).norm() > c.sp_tol * std::max(1.0, m.norm())) {
      throw ConfigError(
          "initial.m violates the symmetry invariant of the moment matrix "
          "(phi = J m leaves sp(2n))");
    }
    return m;
  }
  if (!c.ys0.empty() || !c.zs0.empty()) {
    std::vector<Eigen::VectorXd> ys, zs;
    for (const auto& v : c.ys0) ys.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    for (const auto& v : c.zs0) zs.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    return compose(ys, zs, dim);
  }
  return Eigen::MatrixXd::Zero(dim, dim);
}

}  // namespace twosys
