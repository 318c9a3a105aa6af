#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mskit/harness.hpp"
#include "mskit/intertwine.hpp"
#include "mskit/json_io.hpp"

namespace {

using mskit::cd;
using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// JSON arguments may be inline or @file.
std::string slurp(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return arg;
  std::ifstream in(arg.substr(1));
  if (!in) throw UsageError("cannot open " + arg.substr(1));
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

mskit::BlaschkeProduct blaschke_arg(const std::string& arg, const char* name) {
  try {
    return mskit::blaschke_from_json(slurp(arg));
  } catch (const mskit::Error& e) {
    throw UsageError(std::string(name) + ": " + e.what());
  }
}

// Laurent symbol: {"lo": k, "coeffs": [[re,im], ...]} or a bare coefficient
// array starting at index 0.
mskit::CircleFunction laurent_arg(const std::string& arg, int grid, const char* name) {
  try {
    json j = json::parse(slurp(arg));
    int lo = 0;
    json coeffs = j;
    if (j.is_object()) {
      lo = j.value("lo", 0);
      coeffs = j.at("coeffs");
    }
    Eigen::VectorXcd v(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      const json& c = coeffs[i];
      if (c.is_number())
        v[i] = cd(c.get<double>(), 0.0);
      else
        v[i] = cd(c.at(0).get<double>(), c.at(1).get<double>());
    }
    return mskit::CircleFunction::from_coefficients(lo, v, grid);
  } catch (const json::exception& e) {
    throw UsageError(std::string(name) + ": " + e.what());
  } catch (const mskit::Error& e) {
    throw UsageError(std::string(name) + ": " + e.what());
  }
}

json complex_json(cd z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

json coeffs_json(const mskit::CircleFunction& f) {
  int band = f.effective_band(1e-12);
  json coeffs = json::array();
  for (int k = -band; k <= band; ++k) coeffs.push_back(complex_json(f.coeff(k)));
  return json{{"lo", -band}, {"coeffs", coeffs}};
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int run_gcd(const std::string& a_text, const std::string& b_text) {
  mskit::BlaschkeProduct a = blaschke_arg(a_text, "first operand");
  mskit::BlaschkeProduct b = blaschke_arg(b_text, "second operand");
  emit(json{{"gcd", json::parse(mskit::to_json(mskit::BlaschkeProduct::gcd(a, b)))},
            {"lcm", json::parse(mskit::to_json(mskit::BlaschkeProduct::lcm(a, b)))}});
  return 0;
}

int run_basis(const std::string& theta_text, int grid) {
  mskit::ModelBasis mb(blaschke_arg(theta_text, "--theta"), grid);
  json basis = json::array();
  for (int k = 0; k < mb.dim(); ++k) {
    json samples = json::array();
    const Eigen::VectorXcd& s = mb.basis_function(k).samples();
    for (Eigen::Index i = 0; i < s.size(); ++i) samples.push_back(complex_json(s[i]));
    basis.push_back(samples);
  }
  emit(json{{"dim", mb.dim()},
            {"grid", mb.grid_size()},
            {"gram_residual", mb.gram_residual()},
            {"basis", basis}});
  return 0;
}

int run_atto(const std::string& theta_text, const std::string& alpha_text,
             const std::string& phi_text, int grid) {
  mskit::BlaschkeProduct theta = blaschke_arg(theta_text, "--theta");
  mskit::BlaschkeProduct alpha = blaschke_arg(alpha_text, "--alpha");
  int n = grid ? grid
               : mskit::default_grid(std::max(theta.spectral_radius(), alpha.spectral_radius()));
  mskit::ModelBasis mt(theta, n), ma(alpha, n);
  mskit::CircleFunction phi = laurent_arg(phi_text, n, "--phi");
  mskit::OperatorMatrix a = mskit::atto_matrix(phi, mt, ma);
  emit(json{{"rows", a.matrix().rows()},
            {"cols", a.matrix().cols()},
            {"matrix", matrix_json(a.matrix())},
            {"norm", mskit::operator_norm(a)}});
  return 0;
}

int run_intertwine(const std::string& theta_text, const std::string& alpha_text, int grid) {
  mskit::BlaschkeProduct theta = blaschke_arg(theta_text, "--theta");
  mskit::BlaschkeProduct alpha = blaschke_arg(alpha_text, "--alpha");
  int n = grid ? grid
               : mskit::default_grid(std::max(theta.spectral_radius(), alpha.spectral_radius()));
  mskit::ModelBasis mt(theta, n), ma(alpha, n);
  mskit::IntertwinerBasis ib = mskit::solve_intertwiners(mt, ma);
  json ops = json::array(), symbols = json::array(), residuals = json::array();
  for (const auto& op : ib.ops) {
    ops.push_back(matrix_json(op.matrix()));
    mskit::CircleFunction phi = mskit::symbol_of_intertwiner(op, mt, ma);
    symbols.push_back(coeffs_json(phi));
    residuals.push_back(mskit::membership_residual(phi, theta, alpha));
  }
  json sv = json::array();
  for (Eigen::Index i = 0; i < ib.singular_values.size(); ++i)
    sv.push_back(ib.singular_values[i]);
  emit(json{{"dim", ib.dim()},
            {"singular_values", sv},
            {"ops", ops},
            {"symbols", symbols},
            {"membership_residuals", residuals}});
  return 0;
}

mskit::LaurentWindow parse_window(const std::string& text) {
  mskit::LaurentWindow w;
  int lo = 0, hi = 0, guard = 0;
  char extra = 0;
  if (std::sscanf(text.c_str(), "%d,%d,%d%c", &lo, &hi, &guard, &extra) != 3)
    throw UsageError("--window expects lo,hi,guard");
  w.lo = lo;
  w.hi = hi;
  w.guard = guard;
  try {
    w.validate();
  } catch (const mskit::Error& e) {
    throw UsageError(std::string("--window: ") + e.what());
  }
  return w;
}

const char* case_label(mskit::IdattoCase k) {
  switch (k) {
    case mskit::IdattoCase::case1: return "case1";
    case mskit::IdattoCase::case2: return "case2";
    default: return "none";
  }
}

int run_dual(const std::string& theta_text, const std::string& alpha_text,
             const std::string& phi_text, const std::string& window_text) {
  mskit::BlaschkeProduct theta = blaschke_arg(theta_text, "--theta");
  mskit::BlaschkeProduct alpha = blaschke_arg(alpha_text, "--alpha");
  mskit::LaurentWindow w;
  mskit::CircleFunction phi;
  if (!window_text.empty()) {
    w = parse_window(window_text);
    phi = laurent_arg(phi_text, w.grid, "--phi");
  } else {
    phi = laurent_arg(phi_text, mskit::LaurentWindow{}.grid, "--phi");
    w = mskit::fitted_window(theta, alpha, phi.effective_band(1e-12));
  }
  mskit::DualBlockOperator d = mskit::dtto_blocks(phi, theta, alpha, w);
  double intertwine = mskit::dual_intertwine_residual(d);
  double rank2 = mskit::rank2_identity_residual(phi, theta, alpha, w);
  mskit::IdattoCase cls = mskit::idatto_classify(phi, theta, alpha);
  emit(json{{"classification", case_label(cls)},
            {"window", json::parse(mskit::to_json(w))},
            {"residuals", {{"intertwine", intertwine}, {"rank_two_identity", rank2}}},
            {"block_norms",
             {{"t_hat", d.t_hat().norm()},
              {"gamma_check", d.gamma_check().norm()},
              {"gamma_hat", d.gamma_hat().norm()},
              {"t_check", d.t_check().norm()}}}});
  return 0;
}

void apply_check_flags(mskit::CheckConfig& cfg, const std::string& deg,
                       const std::vector<std::string>& tols) {
  if (!deg.empty()) {
    auto dots = deg.find("..");
    try {
      if (dots == std::string::npos) {
        cfg.degree_lo = cfg.degree_hi = std::stoi(deg);
      } else {
        cfg.degree_lo = std::stoi(deg.substr(0, dots));
        cfg.degree_hi = std::stoi(deg.substr(dots + 2));
      }
    } catch (const std::exception&) {
      throw UsageError("--deg expects a..b");
    }
  }
  for (const std::string& t : tols) {
    auto eq = t.find('=');
    if (eq == std::string::npos) throw UsageError("--tol expects name=value");
    std::string name = t.substr(0, eq);
    if (!mskit::default_tolerances().count(name))
      throw UsageError("unknown tolerance '" + name + "'");
    try {
      cfg.tolerances[name] = std::stod(t.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("--tol expects name=value");
    }
  }
}

int run_verification(const std::string& id, std::uint64_t seed, int trials, const std::string& deg,
                     const std::vector<std::string>& tols, const std::string& json_path) {
  mskit::CheckConfig cfg;
  cfg.theorem_id = id;
  cfg.seed = seed;
  cfg.trials = trials;
  apply_check_flags(cfg, deg, tols);
  mskit::VerificationReport rep = mskit::run_check(cfg);
  std::string text = mskit::report_to_json(rep, 2);
  std::cout << text << "\n";
  if (!json_path.empty()) {
    std::ofstream out(json_path);
    if (!out) throw UsageError("cannot write " + json_path);
    out << text << "\n";
  }
  std::cerr << rep.theorem_id << ": " << (rep.pass ? "pass" : "FAIL") << " (" << rep.passed << "/"
            << rep.trials << " pass, " << rep.failed << " fail, " << rep.indeterminate
            << " indeterminate)\n";
  return rep.pass ? 0 : 1;
}

int run_suite(std::uint64_t seed, const std::string& json_path) {
  std::vector<mskit::VerificationReport> reports = mskit::run_all(seed);
  bool all = true;
  for (const auto& r : reports) {
    all = all && r.pass;
    std::ostringstream line;
    line << r.theorem_id;
    for (std::size_t pad = line.str().size(); pad < 24; ++pad) line << ' ';
    line << (r.pass ? "pass" : "FAIL") << "  " << r.passed << "/" << r.trials
         << "  max_residual=" << std::scientific << r.max_residual << "  " << std::fixed
         << r.elapsed_seconds << "s";
    std::cout << line.str() << "\n";
  }
  std::cout << "suite: " << (all ? "pass" : "FAIL") << "\n";
  if (!json_path.empty()) {
    std::ofstream out(json_path);
    if (!out) throw UsageError("cannot write " + json_path);
    out << mskit::reports_to_json(reports, 2) << "\n";
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"model space toolkit"};
  app.require_subcommand(1);

  std::string arg_a, arg_b, arg_theta, arg_alpha, arg_phi, arg_window, arg_deg, arg_json, arg_id;
  std::vector<std::string> arg_tols;
  int arg_grid = 0;
  int arg_trials = 0;
  std::uint64_t arg_seed = 1;
  int rc = 0;

  CLI::App* c_gcd = app.add_subcommand("gcd", "gcd/lcm of two inner functions");
  c_gcd->add_option("first", arg_a, "first inner function (JSON or @file)")->required();
  c_gcd->add_option("second", arg_b, "second inner function (JSON or @file)")->required();
  c_gcd->callback([&] { rc = run_gcd(arg_a, arg_b); });

  CLI::App* c_basis = app.add_subcommand("basis", "orthonormal basis of a model space");
  c_basis->add_option("--theta", arg_theta, "inner function (JSON or @file)")->required();
  c_basis->add_option("--grid", arg_grid, "grid size (power of two; 0 = automatic)");
  c_basis->callback([&] { rc = run_basis(arg_theta, arg_grid); });

  CLI::App* c_atto = app.add_subcommand("atto", "truncated Toeplitz operator matrix");
  c_atto->add_option("--theta", arg_theta, "domain inner function")->required();
  c_atto->add_option("--alpha", arg_alpha, "codomain inner function")->required();
  c_atto->add_option("--phi", arg_phi, "symbol as Laurent coefficients")->required();
  c_atto->add_option("--grid", arg_grid, "grid size (power of two; 0 = automatic)");
  c_atto->callback([&] { rc = run_atto(arg_theta, arg_alpha, arg_phi, arg_grid); });

  CLI::App* c_inter = app.add_subcommand("intertwine", "solve S_alpha A = A S_theta");
  c_inter->add_option("--theta", arg_theta, "domain inner function")->required();
  c_inter->add_option("--alpha", arg_alpha, "codomain inner function")->required();
  c_inter->add_option("--grid", arg_grid, "grid size (power of two; 0 = automatic)");
  c_inter->callback([&] { rc = run_intertwine(arg_theta, arg_alpha, arg_grid); });

  CLI::App* c_dual = app.add_subcommand("dual", "dual-side block operator diagnostics");
  c_dual->add_option("--theta", arg_theta, "domain inner function")->required();
  c_dual->add_option("--alpha", arg_alpha, "codomain inner function")->required();
  c_dual->add_option("--phi", arg_phi, "symbol as Laurent coefficients")->required();
  c_dual->add_option("--window", arg_window, "lo,hi,guard (default: fitted automatically)");
  c_dual->callback([&] { rc = run_dual(arg_theta, arg_alpha, arg_phi, arg_window); });

  CLI::App* c_check = app.add_subcommand("check", "run one randomized verification");
  c_check->add_option("id", arg_id, "check id (see 'mskit check --list')");
  bool list_ids = false;
  c_check->add_flag("--list", list_ids, "list registered check ids");
  c_check->add_option("--seed", arg_seed, "base seed");
  c_check->add_option("--trials", arg_trials, "trial count (0 = check default)");
  c_check->add_option("--deg", arg_deg, "degree range a..b (within 1..12)");
  c_check->add_option("--tol", arg_tols, "tolerance override name=value");
  c_check->add_option("--json", arg_json, "also write the report to this file");
  c_check->callback([&] {
    if (list_ids) {
      for (const auto& id : mskit::check_ids()) std::cout << id << "\n";
      rc = 0;
      return;
    }
    if (arg_id.empty()) throw UsageError("check requires an id");
    rc = run_verification(arg_id, arg_seed, arg_trials, arg_deg, arg_tols, arg_json);
  });

  CLI::App* c_suite = app.add_subcommand("suite", "run every registered verification");
  c_suite->add_option("--seed", arg_seed, "base seed");
  c_suite->add_option("--json", arg_json, "also write all reports to this file");
  c_suite->callback([&] { rc = run_suite(arg_seed, arg_json); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const mskit::UnknownTheorem& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const mskit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
