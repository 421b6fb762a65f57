// curvwell: batch front end for the saddle/pizza solvers and the condition
// checkers. One command per invocation; artifacts land in --out.
//
// Exit status: 0 all requested verdicts pass, 2 a verdict failed, 1 error.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "curvwell/io.hpp"
#include "curvwell/verify.hpp"

namespace fs = std::filesystem;
using curvwell::io::json;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

struct Args {
  std::string command;
  std::map<std::string, std::string> kv;  // config file merged, flags override

  bool has(const std::string& key) const { return kv.count(key) != 0; }
  std::string str(const std::string& key, const std::string& dflt) const {
    auto it = kv.find(key);
    return it == kv.end() ? dflt : it->second;
  }
  double num(const std::string& key, double dflt) const {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    try {
      std::size_t used = 0;
      const double v = std::stod(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument(it->second);
      return v;
    } catch (const std::exception&) {
      throw std::domain_error("flag --" + key + " expects a number, got '" + it->second + "'");
    }
  }
  int integer(const std::string& key, int dflt) const {
    const double v = num(key, dflt);
    if (v != std::floor(v)) throw std::domain_error("flag --" + key + " expects an integer");
    return static_cast<int>(v);
  }
  std::uint64_t seed() const {
    auto it = kv.find("seed");
    if (it == kv.end()) return curvwell::kDefaultProbeSeed;
    return std::stoull(it->second, nullptr, 0);  // accepts decimal and 0x-hex
  }
};

// Config file: one `key = value` per line, `#` comments. Flags override.
std::map<std::string, std::string> read_config_file(const fs::path& path) {
  std::ifstream f(path);
  if (!f.good()) throw std::domain_error("cannot open config file: " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::domain_error("config line " + std::to_string(lineno) + " is not 'key = value'");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

Args parse_args(int argc, char** argv) {
  if (argc < 2) throw std::domain_error("usage: curvwell <command> [--flag value ...]");
  Args a;
  a.command = argv[1];
  std::map<std::string, std::string> flags;
  std::optional<fs::path> config;
  for (int i = 2; i < argc; ++i) {
    std::string tok = argv[i];
    if (tok.rfind("--", 0) != 0) throw std::domain_error("unexpected argument '" + tok + "'");
    tok = tok.substr(2);
    std::string key = tok, value;
    const auto eq = tok.find('=');
    if (eq != std::string::npos) {
      key = tok.substr(0, eq);
      value = tok.substr(eq + 1);
    } else {
      if (i + 1 >= argc) throw std::domain_error("flag --" + key + " expects a value");
      value = argv[++i];
    }
    if (key == "config") {
      config = value;
    } else {
      flags[key] = value;
    }
  }
  if (config) a.kv = read_config_file(*config);
  for (const auto& [k, v] : flags) a.kv[k] = v;  // flags override the file
  return a;
}

json config_json(const Args& a) {
  json j;
  j["command"] = a.command;
  for (const auto& [k, v] : a.kv) j[k] = v;
  return j;
}

curvwell::NFunctionSpec parse_phi(const std::string& text) {
  if (text.rfind("truncated:L=", 0) == 0) {
    return curvwell::NFunctionSpec::truncated_mean_curvature(std::stod(text.substr(12)));
  }
  if (text.rfind("power:p=", 0) == 0) {
    return curvwell::NFunctionSpec::power_law(std::stod(text.substr(8)));
  }
  throw std::domain_error("--phi expects 'truncated:L=<L>' or 'power:p=<p>', got '" + text + "'");
}

curvwell::CoefficientField parse_coefficient(const std::string& text) {
  if (text.rfind("periodic:c=", 0) == 0) {
    return curvwell::CoefficientField::periodic_model(std::stod(text.substr(11)));
  }
  if (text.rfind("constant:b=", 0) == 0) {
    return curvwell::CoefficientField::constant(std::stod(text.substr(11)));
  }
  if (text.rfind("table:", 0) == 0) {
    return curvwell::io::read_coefficient_csv(text.substr(6));
  }
  throw std::domain_error(
      "--coef expects 'periodic:c=<c>', 'constant:b=<b>' or 'table:<file>', got '" + text + "'");
}

fs::path out_dir(const Args& a) {
  fs::path dir = a.str("out", ".");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw std::domain_error("output directory not writable: " + dir.string());
  return dir;
}

void write_json(const fs::path& path, const json& doc) {
  curvwell::io::write_text(path, doc.dump(2) + "\n");
}

int finish(const fs::path& dir, json report, bool pass) {
  report["pass"] = pass;
  write_json(dir / "report.json", report);
  return pass ? 0 : 2;
}

int cmd_check_conditions(const Args& a) {
  const fs::path dir = out_dir(a);
  const curvwell::NFunctionSpec spec = parse_phi(a.str("phi", "truncated:L=1"));
  const double kappa2 = a.num("kappa2", 1.0);

  // log-spaced positivity/growth grid
  std::vector<double> grid;
  const double lo = a.num("grid-min", 1e-4), hi = a.num("grid-max", 10.0);
  const int pts = a.integer("grid-points", 200);
  for (int i = 0; i < pts; ++i) {
    grid.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (pts - 1)));
  }

  curvwell::ZetaParams zp;
  const double level = spec.kind() == curvwell::NFunctionKind::TruncatedMeanCurvature
                           ? spec.level()
                           : a.num("L", 1.0);
  zp.delta_alpha = a.num("zeta-delta", 0.05);
  zp.a = a.num("zeta-a", 0.01);
  zp.L = level;
  zp.j = a.num("zeta-j", level + 4.0);
  const double c = zp.center();
  std::vector<double> zgrid;
  for (int i = 0; i <= 1000; ++i) zgrid.push_back(c - 2.0 + 4.0 * i / 1000.0);
  for (int k = 3; k <= 9; ++k) {
    zgrid.push_back(c - std::pow(10.0, -k));
    zgrid.push_back(c + std::pow(10.0, -k));
  }
  std::sort(zgrid.begin(), zgrid.end());

  json checks = json::array();
  bool pass = true;
  {
    const auto rep = curvwell::check_phi_conditions(spec, grid);
    pass = pass && rep.pass;
    checks.push_back(curvwell::io::to_json(rep));
  }
  {
    const auto rep = curvwell::check_tilde_phi4(spec, zp, kappa2, zgrid);
    pass = pass && rep.pass;
    checks.push_back(curvwell::io::to_json(rep));
  }
  {
    const double lambda = a.num("lambda", 1.0);
    const std::vector<double> alphas{lambda / 20.0, lambda / 10.0, lambda / 2.0};
    const auto base = spec.kind() == curvwell::NFunctionKind::TruncatedMeanCurvature
                          ? spec
                          : curvwell::NFunctionSpec::truncated_mean_curvature(level);
    const auto rep = curvwell::check_potential_family(alphas, lambda, base);
    pass = pass && rep.pass;
    checks.push_back(curvwell::io::to_json(rep));
  }
  if (a.has("coef")) {
    const auto rep = curvwell::check_coefficient_symmetries(parse_coefficient(a.str("coef", "")),
                                                            10000, 1e-12, a.seed());
    pass = pass && rep.pass;
    checks.push_back(curvwell::io::to_json(rep));
  }

  json report;
  report["command"] = a.command;
  report["config"] = config_json(a);
  report["checks"] = std::move(checks);
  return finish(dir, std::move(report), pass);
}

curvwell::SolveConfig solve_config(const Args& a) {
  curvwell::SolveConfig cfg;
  cfg.tol_grad = a.num("tolGrad", 1e-10);
  cfg.max_iter = a.integer("maxIter", 50000);
  return cfg;
}

int cmd_solve_1d(const Args& a) {
  const fs::path dir = out_dir(a);
  const double alpha = a.num("alpha", 0.1);
  const double level = a.num("L", 1.0);
  const double T = a.num("T", 80.0);
  const int n = a.integer("n", 1600);
  const double b = a.num("b", 1.0);

  const curvwell::Profile1D q = curvwell::solve_heteroclinic(alpha, level, b, T, n, solve_config(a));
  curvwell::io::write_profile_csv(dir / "field.csv", q);
  write_json(dir / "history.json",
             curvwell::io::history_json(q.history, q.converged, 0.0, config_json(a)));

  json report;
  report["command"] = a.command;
  report["config"] = config_json(a);
  report["converged"] = q.converged;
  report["gradInf"] = q.history.back().grad_inf;
  bool pass = q.converged;
  if (q.unit_coefficient) {
    const auto bracket = curvwell::check_tanh_bracket(q, a.num("bracketTol", 1e-4 * alpha));
    report["bracket"] = curvwell::io::to_json(bracket);
    pass = pass && bracket.lower_holds;
    const auto decay = curvwell::fit_decay(q, 0.0625 * T, 0.3125 * T);
    report["decay"] = curvwell::io::to_json(decay);
  }
  return finish(dir, std::move(report), pass);
}

json verdicts_json(const curvwell::Solution& sol, const curvwell::TheoremReport& thm,
                   const curvwell::TruncationReport& trunc) {
  json j;
  j[thm.theorem == 1 ? "theorem1" : "theorem2"] = curvwell::io::to_json(thm);
  j["truncation"] = curvwell::io::to_json(trunc);
  j["residual"] = curvwell::io::to_json(curvwell::pde_residual(sol));
  j["seed"] = thm.seed;
  j["solutionHash"] = thm.solution_hash;
  return j;
}

int solve_2d_common(const Args& a, const curvwell::Solution& sol, double alpha, double level,
                    int j_sectors) {
  const fs::path dir = out_dir(a);
  for (const std::string& w : sol.warnings) std::cerr << "curvwell: warning: " << w << "\n";
  write_json(dir / "history.json",
             curvwell::io::history_json(sol.history, sol.converged, sol.wall_seconds,
                                        config_json(a)));
  curvwell::io::save_solution(dir / "solution.json", sol, solve_config(a));
  if (!sol.converged) {
    json report;
    report["command"] = a.command;
    report["config"] = config_json(a);
    report["converged"] = false;
    return finish(dir, std::move(report), false);
  }

  const curvwell::ExtendedField field = curvwell::extend_full(sol);
  curvwell::io::write_field_csv(dir / "field.csv", field, a.integer("stride", 4));

  curvwell::VerifyTols tols;
  tols.asym = a.num("asymTol", 0.05);
  const auto thm = j_sectors == 0
                       ? curvwell::check_theorem1(sol, alpha, level, tols, a.seed())
                       : curvwell::check_theorem2(sol, alpha, level, j_sectors, tols, a.seed());
  const auto trunc = curvwell::truncation_consistency(sol, level);

  json report;
  report["command"] = a.command;
  report["config"] = config_json(a);
  report["converged"] = true;
  report.update(verdicts_json(sol, thm, trunc));
  return finish(dir, std::move(report), thm.overall && trunc.pass);
}

int cmd_solve_saddle(const Args& a) {
  const double alpha = a.num("alpha", 0.1);
  const double level = a.num("L", 1.0);
  const auto coef = parse_coefficient(a.str("coef", "periodic:c=2"));
  const auto sol = curvwell::solve_saddle(alpha, level, coef, a.num("R", 40.0),
                                          a.integer("n", 401), solve_config(a));
  return solve_2d_common(a, sol, alpha, level, 0);
}

int cmd_solve_pizza(const Args& a) {
  const double alpha = a.num("alpha", 0.1);
  const double level = a.num("L", 1.0);
  const int j = a.integer("j", 2);
  const auto sol =
      curvwell::solve_pizza(alpha, level, a.num("b", 1.0), j, a.num("R", 40.0),
                            a.integer("nrho", 401), a.integer("ntheta", 65), solve_config(a));
  return solve_2d_common(a, sol, alpha, level, j);
}

int cmd_verify(const Args& a) {
  const fs::path dir = out_dir(a);
  if (!a.has("solution")) throw std::domain_error("verify requires --solution <file>");
  const curvwell::Solution sol = curvwell::io::load_solution(a.str("solution", ""));
  if (!sol.converged) throw std::domain_error("verify: stored solution is not converged");

  const double alpha = sol.problem->alpha();
  const double level = sol.problem->phi().level();
  curvwell::VerifyTols tols;
  tols.asym = a.num("asymTol", 0.05);
  const bool polar = sol.problem->grid().kind == curvwell::GridKind::PolarSector;
  const auto thm = polar ? curvwell::check_theorem2(sol, alpha, level, sol.problem->grid().j,
                                                    tols, a.seed())
                         : curvwell::check_theorem1(sol, alpha, level, tols, a.seed());
  const auto trunc = curvwell::truncation_consistency(sol, level);

  json report;
  report["command"] = a.command;
  report["config"] = config_json(a);
  report.update(verdicts_json(sol, thm, trunc));
  return finish(dir, std::move(report), thm.overall && trunc.pass);
}

int cmd_export(const Args& a) {
  const fs::path dir = out_dir(a);
  if (!a.has("solution")) throw std::domain_error("export requires --solution <file>");
  const curvwell::Solution sol = curvwell::io::load_solution(a.str("solution", ""));
  const curvwell::ExtendedField field = curvwell::extend_full(sol);
  const int stride = a.integer("stride", 1);
  const std::string format = a.str("format", "csv");
  if (format == "csv") {
    curvwell::io::write_field_csv(dir / "field.csv", field, stride);
  } else if (format == "json") {
    curvwell::io::write_field_json(dir / "field.json", field, stride);
  } else {
    throw std::domain_error("--format expects csv or json, got '" + format + "'");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    const Args a = parse_args(argc, argv);
    if (a.command == "check-conditions") return cmd_check_conditions(a);
    if (a.command == "solve-1d") return cmd_solve_1d(a);
    if (a.command == "solve-saddle") return cmd_solve_saddle(a);
    if (a.command == "solve-pizza") return cmd_solve_pizza(a);
    if (a.command == "verify") return cmd_verify(a);
    if (a.command == "export") return cmd_export(a);
    throw std::domain_error("unknown command '" + a.command + "'");
  } catch (const curvwell::ConvergenceError& e) {
    std::cerr << "curvwell: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "curvwell: " << e.what() << "\n";
    return 1;
  }
}
