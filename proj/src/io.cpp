#include "curvwell/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace curvwell::io {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::domain_error(msg);
}

// Shortest round-trip decimal form, the same one the JSON artifacts use.
std::string num(double v) { return json(v).dump(); }

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r' && ch != ' ' && ch != '\t') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::domain_error(std::string("malformed number in ") + what + ": '" + s + "'");
  }
}

}  // namespace

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  require(f.good(), "cannot open for writing: " + path.string());
  f << text;
  require(f.good(), "write failed: " + path.string());
}

void write_profile_csv(const std::filesystem::path& path, const Profile1D& profile) {
  std::ostringstream os;
  os << "t,q,dq\n";
  for (int i = 0; i < profile.n; ++i) {
    os << num(profile.node(i)) << ',' << num(profile.values[i]) << ','
       << num(profile.derivative(i)) << '\n';
  }
  write_text(path, os.str());
}

namespace {

std::string field_rows_csv(const ExtendedField& field, int stride) {
  require(stride >= 1, "stride must be >= 1");
  std::ostringstream os;
  const Grid& g = field.grid();
  if (field.kind() == GridKind::QuadrantTriangle) {
    os << "x,y,u\n";
    const int kmax = (2 * g.n - 2) / stride;
    for (int ky = 0; ky <= kmax; ++ky) {
      const double y = -g.R + ky * stride * g.h;
      for (int kx = 0; kx <= kmax; ++kx) {
        const double x = -g.R + kx * stride * g.h;
        os << num(x) << ',' << num(y) << ',' << num(field.eval_xy(x, y)) << '\n';
      }
    }
  } else {
    os << "rho,theta,u\n";
    const int imax = (g.n_rho - 1) / stride;
    const int mtheta = static_cast<int>(std::floor(2.0 * kPi / (g.dtheta * stride) + 1e-9));
    for (int kt = 0; kt < mtheta; ++kt) {
      const double theta = kt * stride * g.dtheta;
      for (int ki = 0; ki <= imax; ++ki) {
        const double rho = ki * stride * g.drho;
        os << num(rho) << ',' << num(theta) << ',' << num(field.eval_polar(rho, theta)) << '\n';
      }
    }
  }
  return os.str();
}

}  // namespace

void write_field_csv(const std::filesystem::path& path, const ExtendedField& field, int stride) {
  write_text(path, field_rows_csv(field, stride));
}

void write_field_json(const std::filesystem::path& path, const ExtendedField& field, int stride) {
  require(stride >= 1, "stride must be >= 1");
  json doc;
  const Grid& g = field.grid();
  doc["stride"] = stride;
  json pts = json::array();
  if (field.kind() == GridKind::QuadrantTriangle) {
    doc["kind"] = "quadrant-triangle";
    doc["columns"] = {"x", "y", "u"};
    const int kmax = (2 * g.n - 2) / stride;
    for (int ky = 0; ky <= kmax; ++ky) {
      const double y = -g.R + ky * stride * g.h;
      for (int kx = 0; kx <= kmax; ++kx) {
        const double x = -g.R + kx * stride * g.h;
        pts.push_back({x, y, field.eval_xy(x, y)});
      }
    }
  } else {
    doc["kind"] = "polar-sector";
    doc["columns"] = {"rho", "theta", "u"};
    const int imax = (g.n_rho - 1) / stride;
    const int mtheta = static_cast<int>(std::floor(2.0 * kPi / (g.dtheta * stride) + 1e-9));
    for (int kt = 0; kt < mtheta; ++kt) {
      const double theta = kt * stride * g.dtheta;
      for (int ki = 0; ki <= imax; ++ki) {
        const double rho = ki * stride * g.drho;
        pts.push_back({rho, theta, field.eval_polar(rho, theta)});
      }
    }
  }
  doc["points"] = std::move(pts);
  write_text(path, doc.dump(2) + "\n");
}

namespace {

std::vector<std::vector<double>> read_csv_table(const std::filesystem::path& path,
                                                const std::string& header) {
  std::ifstream f(path);
  require(f.good(), "cannot open CSV: " + path.string());
  std::string line;
  require(static_cast<bool>(std::getline(f, line)), "empty CSV: " + path.string());
  {
    auto cells = split_csv_line(line);
    std::string joined;
    for (std::size_t i = 0; i < cells.size(); ++i) joined += (i ? "," : "") + cells[i];
    require(joined == header, "CSV header must be '" + header + "' in " + path.string());
  }
  const std::size_t ncols = std::count(header.begin(), header.end(), ',') + 1;
  std::vector<std::vector<double>> rows;
  while (std::getline(f, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    require(cells.size() == ncols, "bad CSV row in " + path.string() + ": '" + line + "'");
    std::vector<double> row(ncols);
    for (std::size_t c = 0; c < ncols; ++c) row[c] = parse_double(cells[c], path.string().c_str());
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), "CSV has no data rows: " + path.string());
  return rows;
}

}  // namespace

Potential read_potential_csv(const std::filesystem::path& path, double alpha) {
  const auto rows = read_csv_table(path, "t,V,V1,V2");
  std::vector<double> t, v, v1, v2;
  for (const auto& r : rows) {
    t.push_back(r[0]);
    v.push_back(r[1]);
    v1.push_back(r[2]);
    v2.push_back(r[3]);
  }
  return Potential::tabulated(alpha, std::move(t), std::move(v), std::move(v1), std::move(v2));
}

CoefficientField read_coefficient_csv(const std::filesystem::path& path) {
  const auto rows = read_csv_table(path, "x,y,A");
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    xs.push_back(r[0]);
    ys.push_back(r[1]);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  std::vector<double> vals(xs.size() * ys.size(), std::numeric_limits<double>::quiet_NaN());
  for (const auto& r : rows) {
    const std::size_t i = static_cast<std::size_t>(
        std::lower_bound(xs.begin(), xs.end(), r[0]) - xs.begin());
    const std::size_t j = static_cast<std::size_t>(
        std::lower_bound(ys.begin(), ys.end(), r[1]) - ys.begin());
    vals[j * xs.size() + i] = r[2];
  }
  for (double v : vals) {
    require(!std::isnan(v), "coefficient CSV does not fill a rectangular lattice: " + path.string());
  }
  return CoefficientField::tabulated(std::move(xs), std::move(ys), std::move(vals));
}

json to_json(const ConditionReport& report) {
  json j;
  j["condition"] = report.condition;
  j["pass"] = report.pass;
  j["constants"] = report.constants;
  if (report.witness) {
    j["witness"] = {{"point", report.witness->point}, {"detail", report.witness->detail}};
  }
  return j;
}

json to_json(const TheoremReport& report) {
  json items;
  for (const auto& [key, v] : report.items) {
    items[key] = {{"pass", v.pass}, {"measured", v.measured}, {"tol", v.tol}};
  }
  return json{{"theorem", report.theorem},
              {"items", items},
              {"overall", report.overall},
              {"seed", report.seed},
              {"solutionHash", report.solution_hash}};
}

json to_json(const TruncationReport& report) {
  json j{{"pass", report.pass},
         {"maxGradSq", report.max_grad_sq},
         {"margin", report.margin},
         {"branchIdentityExact", report.branch_identity_exact}};
  if (report.witness) {
    j["witness"] = {{"point", report.witness->point}, {"detail", report.witness->detail}};
  }
  return j;
}

json to_json(const ResidualNorms& norms) {
  return json{{"infNorm", norms.inf_norm}, {"l2Norm", norms.l2_norm}};
}

json to_json(const BracketReport& report) {
  return json{{"lowerHolds", report.lower_holds},
              {"minSlack", report.min_slack},
              {"kappa", report.kappa},
              {"tol", report.tol}};
}

json to_json(const DecayFit& fit) {
  return json{{"theta1", fit.theta1}, {"theta2", fit.theta2}, {"beta1", fit.beta1},
              {"beta2", fit.beta2},   {"kappa", fit.kappa},   {"windowLo", fit.window_lo},
              {"windowHi", fit.window_hi}, {"residualQ", fit.residual_q},
              {"residualDq", fit.residual_dq}};
}

json history_json(const std::vector<IterRecord>& history, bool converged, double wall_seconds,
                  const json& config) {
  json iters = json::array();
  for (const IterRecord& r : history) {
    iters.push_back({{"k", r.k}, {"energy", r.energy}, {"gradInf", r.grad_inf}});
  }
  return json{{"config", config},
              {"iterations", std::move(iters)},
              {"converged", converged},
              {"wallSeconds", wall_seconds}};
}

namespace {

json coefficient_json(const CoefficientField& c) {
  switch (c.kind()) {
    case CoefficientKind::Constant:
      return json{{"kind", "constant"}, {"b", c.constant_value()}};
    case CoefficientKind::PeriodicModel:
      return json{{"kind", "periodic"}, {"c", c.model_offset()}};
    case CoefficientKind::Tabulated:
      return json{{"kind", "tabulated"},
                  {"xs", c.table_xs()},
                  {"ys", c.table_ys()},
                  {"values", c.table_values()}};
  }
  throw std::domain_error("unknown coefficient kind");
}

CoefficientField coefficient_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") return CoefficientField::constant(j.at("b").get<double>());
  if (kind == "periodic") return CoefficientField::periodic_model(j.at("c").get<double>());
  if (kind == "tabulated") {
    return CoefficientField::tabulated(j.at("xs").get<std::vector<double>>(),
                                       j.at("ys").get<std::vector<double>>(),
                                       j.at("values").get<std::vector<double>>());
  }
  throw std::domain_error("solution file: unknown coefficient kind '" + kind + "'");
}

}  // namespace

void save_solution(const std::filesystem::path& path, const Solution& solution,
                   const SolveConfig& cfg) {
  require(solution.problem != nullptr, "save_solution: empty solution");
  const Problem& p = *solution.problem;
  const Grid& g = p.grid();
  json doc;
  if (g.kind == GridKind::QuadrantTriangle) {
    doc["kind"] = "quadrant-triangle";
    doc["n"] = g.n;
  } else {
    doc["kind"] = "polar-sector";
    doc["nRho"] = g.n_rho;
    doc["nTheta"] = g.n_theta;
    doc["j"] = g.j;
  }
  doc["R"] = g.R;
  doc["alpha"] = p.alpha();
  doc["L"] = p.phi().level();
  doc["coefficient"] = coefficient_json(p.coefficient());
  doc["farData"] = p.far_data();
  doc["values"] = solution.field.values;
  doc["converged"] = solution.converged;
  doc["tolGrad"] = cfg.tol_grad;
  doc["maxIter"] = cfg.max_iter;
  write_text(path, doc.dump(2) + "\n");
}

Solution load_solution(const std::filesystem::path& path) {
  std::ifstream f(path);
  require(f.good(), "cannot open solution file: " + path.string());
  json doc;
  f >> doc;

  const std::string kind = doc.at("kind").get<std::string>();
  const double R = doc.at("R").get<double>();
  std::shared_ptr<Grid> grid;
  if (kind == "quadrant-triangle") {
    grid = std::make_shared<Grid>(build_grid(R, doc.at("n").get<int>()));
  } else if (kind == "polar-sector") {
    grid = std::make_shared<Grid>(build_grid(R, doc.at("nRho").get<int>(),
                                             doc.at("nTheta").get<int>(), doc.at("j").get<int>()));
  } else {
    throw std::domain_error("solution file: unknown grid kind '" + kind + "'");
  }

  const double alpha = doc.at("alpha").get<double>();
  const double L = doc.at("L").get<double>();
  auto problem = std::make_shared<Problem>(
      grid, NFunctionSpec::truncated_mean_curvature(L), Potential::quartic(alpha),
      coefficient_from_json(doc.at("coefficient")), doc.at("farData").get<std::vector<double>>());

  Solution sol;
  sol.problem = problem;
  sol.field.grid = grid;
  sol.field.values = doc.at("values").get<std::vector<double>>();
  require(sol.field.values.size() == static_cast<std::size_t>(grid->node_count()),
          "solution file: value count does not match the grid");
  sol.converged = doc.at("converged").get<bool>();
  return sol;
}

}  // namespace curvwell::io
