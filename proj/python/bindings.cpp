// Python module exposing the main operations: N-function machinery and
// condition checkers, the 1D heteroclinic solver, the 2D saddle/pizza
// solvers and the theorem verification layer.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "curvwell/io.hpp"
#include "curvwell/verify.hpp"

namespace py = pybind11;
using namespace curvwell;

namespace {

py::dict condition_dict(const ConditionReport& r) {
  py::dict d;
  d["condition"] = r.condition;
  d["pass"] = r.pass;
  py::dict consts;
  for (const auto& [k, v] : r.constants) consts[py::str(k)] = v;
  d["constants"] = consts;
  if (r.witness) {
    py::dict w;
    w["point"] = r.witness->point;
    w["detail"] = r.witness->detail;
    d["witness"] = w;
  } else {
    d["witness"] = py::none();
  }
  return d;
}

py::dict theorem_dict(const TheoremReport& r) {
  py::dict d;
  d["theorem"] = r.theorem;
  py::dict items;
  for (const auto& [k, v] : r.items) {
    py::dict item;
    item["pass"] = v.pass;
    item["measured"] = v.measured;
    item["tol"] = v.tol;
    items[py::str(k)] = item;
  }
  d["items"] = items;
  d["overall"] = r.overall;
  d["seed"] = r.seed;
  d["solutionHash"] = r.solution_hash;
  return d;
}

py::dict truncation_dict(const TruncationReport& r) {
  py::dict d;
  d["pass"] = r.pass;
  d["maxGradSq"] = r.max_grad_sq;
  d["margin"] = r.margin;
  d["branchIdentityExact"] = r.branch_identity_exact;
  return d;
}

}  // namespace

PYBIND11_MODULE(curvwell, m) {
  m.doc() = "Saddle and pizza solutions of Allen-Cahn equations with the "
            "truncated prescribed mean curvature operator";

  py::register_exception<SingularityError>(m, "SingularityError", PyExc_ArithmeticError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  m.def("truncation_constants", [](double L) {
    const TruncationConstants c = truncation_constants(L);
    return py::make_tuple(c.x_L, c.y_L);
  });

  py::class_<NFunctionSpec>(m, "NFunctionSpec")
      .def_static("truncated_mean_curvature", &NFunctionSpec::truncated_mean_curvature)
      .def_static("power_law", &NFunctionSpec::power_law)
      .def_property_readonly("x_L", &NFunctionSpec::x_L)
      .def_property_readonly("y_L", &NFunctionSpec::y_L)
      .def("phi", &NFunctionSpec::phi)
      .def("big_phi", &NFunctionSpec::big_phi)
      .def("describe", &NFunctionSpec::describe);

  py::class_<ZetaParams>(m, "ZetaParams")
      .def(py::init([](double delta_alpha, double a, double j, double L) {
             ZetaParams p{delta_alpha, a, j, L};
             p.validate();
             return p;
           }),
           py::arg("delta_alpha"), py::arg("a"), py::arg("j"), py::arg("L"))
      .def_property_readonly("center", &ZetaParams::center);

  m.def("zeta", [](const ZetaParams& p, double t) {
    const ZetaValue z = zeta(p, t);
    return py::make_tuple(z.value, z.derivative);
  });

  m.def("check_phi_conditions", [](const NFunctionSpec& s, const std::vector<double>& grid) {
    return condition_dict(check_phi_conditions(s, grid));
  });
  m.def("check_tilde_phi4",
        [](const NFunctionSpec& s, const ZetaParams& p, double kappa2,
           const std::vector<double>& grid) {
          return condition_dict(check_tilde_phi4(s, p, kappa2, grid));
        });

  py::class_<Potential>(m, "Potential")
      .def_static("quartic", &Potential::quartic)
      .def_property_readonly("alpha", &Potential::alpha)
      .def("eval", &Potential::eval, py::arg("t"), py::arg("order") = 0);

  py::class_<CoefficientField>(m, "CoefficientField")
      .def_static("constant", &CoefficientField::constant)
      .def_static("periodic_model", &CoefficientField::periodic_model)
      .def("eval", &CoefficientField::eval)
      .def("line_average", &CoefficientField::line_average);

  m.def("check_potential_family",
        [](const std::vector<double>& alphas, double lambda, const NFunctionSpec& s) {
          return condition_dict(check_potential_family(alphas, lambda, s));
        });
  m.def("check_coefficient_symmetries",
        [](const CoefficientField& f, int n, double tol, std::uint64_t seed) {
          return condition_dict(check_coefficient_symmetries(f, n, tol, seed));
        },
        py::arg("field"), py::arg("n"), py::arg("tol"), py::arg("seed") = kDefaultProbeSeed);

  py::class_<SolveConfig>(m, "SolveConfig")
      .def(py::init<>())
      .def_readwrite("tol_grad", &SolveConfig::tol_grad)
      .def_readwrite("max_iter", &SolveConfig::max_iter);

  py::class_<Profile1D>(m, "Profile1D")
      .def_readonly("T", &Profile1D::T)
      .def_readonly("n", &Profile1D::n)
      .def_readonly("alpha", &Profile1D::alpha)
      .def_readonly("values", &Profile1D::values)
      .def_readonly("converged", &Profile1D::converged)
      .def("node", &Profile1D::node)
      .def("eval", &Profile1D::eval)
      .def("energy_history", [](const Profile1D& p) {
        std::vector<double> e;
        for (const auto& r : p.history) e.push_back(r.energy);
        return e;
      });

  m.def("solve_heteroclinic",
        [](double alpha, double L, double a, double T, int n, const SolveConfig& cfg) {
          return solve_heteroclinic(alpha, L, a, T, n, cfg);
        },
        py::arg("alpha"), py::arg("L"), py::arg("a"), py::arg("T"), py::arg("n"),
        py::arg("cfg") = SolveConfig{});

  m.def("check_tanh_bracket", [](const Profile1D& p, double tol) {
    const BracketReport r = check_tanh_bracket(p, tol);
    py::dict d;
    d["lowerHolds"] = r.lower_holds;
    d["minSlack"] = r.min_slack;
    d["kappa"] = r.kappa;
    return d;
  });

  m.def("fit_decay", [](const Profile1D& p, double lo, double hi) {
    const DecayFit f = fit_decay(p, lo, hi);
    py::dict d;
    d["theta1"] = f.theta1;
    d["theta2"] = f.theta2;
    d["beta1"] = f.beta1;
    d["beta2"] = f.beta2;
    d["kappa"] = f.kappa;
    return d;
  });

  py::class_<Solution>(m, "Solution")
      .def_readonly("converged", &Solution::converged)
      .def_readonly("wall_seconds", &Solution::wall_seconds)
      .def_property_readonly("values", [](const Solution& s) { return s.field.values; })
      .def_property_readonly("iterations", [](const Solution& s) { return s.history.size(); })
      .def_property_readonly("final_energy", [](const Solution& s) { return s.history.back().energy; })
      .def_property_readonly("energy_history", [](const Solution& s) {
        std::vector<double> e;
        for (const auto& r : s.history) e.push_back(r.energy);
        return e;
      });

  m.def("solve_saddle",
        [](double alpha, double L, const CoefficientField& A, double R, int n,
           const SolveConfig& cfg) { return solve_saddle(alpha, L, A, R, n, cfg); },
        py::arg("alpha"), py::arg("L"), py::arg("A"), py::arg("R"), py::arg("n"),
        py::arg("cfg") = SolveConfig{});

  m.def("solve_pizza",
        [](double alpha, double L, double b, int j, double R, int n_rho, int n_theta,
           const SolveConfig& cfg) { return solve_pizza(alpha, L, b, j, R, n_rho, n_theta, cfg); },
        py::arg("alpha"), py::arg("L"), py::arg("b"), py::arg("j"), py::arg("R"),
        py::arg("n_rho") = 401, py::arg("n_theta") = 65, py::arg("cfg") = SolveConfig{});

  py::class_<ExtendedField>(m, "ExtendedField")
      .def("__call__", &ExtendedField::eval_xy)
      .def("eval_polar", &ExtendedField::eval_polar);

  m.def("extend_full", &extend_full);

  m.def("pde_residual", [](const Solution& s) {
    const ResidualNorms r = pde_residual(s);
    return py::make_tuple(r.inf_norm, r.l2_norm);
  });
  m.def("check_theorem1",
        [](const Solution& s, double alpha, double L, double asym_tol, std::uint64_t seed) {
          VerifyTols t;
          t.asym = asym_tol;
          return theorem_dict(check_theorem1(s, alpha, L, t, seed));
        },
        py::arg("solution"), py::arg("alpha"), py::arg("L"), py::arg("asym_tol") = 0.05,
        py::arg("seed") = kDefaultProbeSeed);
  m.def("check_theorem2",
        [](const Solution& s, double alpha, double L, int j, double asym_tol, std::uint64_t seed) {
          VerifyTols t;
          t.asym = asym_tol;
          return theorem_dict(check_theorem2(s, alpha, L, j, t, seed));
        },
        py::arg("solution"), py::arg("alpha"), py::arg("L"), py::arg("j"),
        py::arg("asym_tol") = 0.05, py::arg("seed") = kDefaultProbeSeed);
  m.def("truncation_consistency", [](const Solution& s, double L) {
    return truncation_dict(truncation_consistency(s, L));
  });
}
