#include "curvwell/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace curvwell {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void require(bool cond, const char* msg) {
  if (!cond) throw std::domain_error(msg);
}

}  // namespace

ResidualNorms pde_residual(const Solution& solution) {
  require(solution.converged, "pde_residual: solution not converged");
  const Problem& p = *solution.problem;
  std::vector<double> grad;
  p.energy_gradient(solution.field, grad);
  ResidualNorms out;
  double weighted = 0.0;
  for (std::size_t f = 0; f < p.free_nodes().size(); ++f) {
    const int idx = p.free_nodes()[f];
    const double w = p.node_weight(idx);
    const double r = grad[static_cast<std::size_t>(idx)] / w;
    out.inf_norm = std::max(out.inf_norm, std::abs(r));
    weighted += w * r * r;
  }
  out.l2_norm = std::sqrt(weighted);
  return out;
}

std::string solution_hash(const Solution& solution) {
  const Grid& g = solution.field.grid ? *solution.field.grid : solution.problem->grid();
  Fnv1a h;
  h.add_u64(g.kind == GridKind::QuadrantTriangle ? 1 : 2);
  h.add_double(g.R);
  h.add_u64(static_cast<std::uint64_t>(g.kind == GridKind::QuadrantTriangle ? g.n : g.n_rho));
  h.add_u64(static_cast<std::uint64_t>(g.kind == GridKind::QuadrantTriangle ? 0 : g.n_theta));
  h.add_u64(static_cast<std::uint64_t>(g.kind == GridKind::QuadrantTriangle ? 0 : g.j));
  if (solution.problem) {
    h.add_double(solution.problem->alpha());
    h.add_double(solution.problem->phi().level());
    for (double v : solution.problem->far_data()) h.add_double(v);
  }
  for (double v : solution.field.values) h.add_double(v);
  return h.hex();
}

namespace {

struct Extremes {
  double min_v = std::numeric_limits<double>::infinity();
  double max_v = -std::numeric_limits<double>::infinity();
};

Extremes free_node_extremes(const Solution& sol) {
  Extremes e;
  for (int idx : sol.problem->free_nodes()) {
    const double v = sol.field.values[static_cast<std::size_t>(idx)];
    e.min_v = std::min(e.min_v, v);
    e.max_v = std::max(e.max_v, v);
  }
  return e;
}

}  // namespace

TheoremReport check_theorem1(const Solution& solution, double alpha, double L,
                             const VerifyTols& tols, std::uint64_t seed) {
  require(solution.problem != nullptr, "check_theorem1: empty solution");
  require(solution.problem->grid().kind == GridKind::QuadrantTriangle,
          "check_theorem1: requires a Cartesian (quadrant-triangle) solution");

  TheoremReport rep;
  rep.theorem = 1;
  rep.seed = seed;
  rep.solution_hash = solution_hash(solution);

  const ExtendedField u = extend_full(solution);
  const double R = solution.problem->grid().R;
  ProbeRng rng(seed);

  // (a) strict interior bounds on the fundamental domain
  {
    const Extremes e = free_node_extremes(solution);
    ItemVerdict v;
    v.tol = 0.0;
    v.measured = std::min(e.min_v, alpha - e.max_v);
    v.pass = e.min_v > 0.0 && e.max_v < alpha;
    rep.items["a"] = v;
  }

  // (b), (c) reflection identities on the extended evaluator
  {
    double worst_b = 0.0, worst_c = 0.0;
    for (int s = 0; s < 10000; ++s) {
      const double x = rng.uniform(-R, R);
      const double y = rng.uniform(-R, R);
      const double v = u.eval_xy(x, y);
      worst_b = std::max(worst_b, std::abs(v + u.eval_xy(-x, y)));
      worst_b = std::max(worst_b, std::abs(v + u.eval_xy(x, -y)));
      worst_c = std::max(worst_c, std::abs(v - u.eval_xy(y, x)));
    }
    rep.items["b"] = {worst_b <= tols.identity, worst_b, tols.identity};
    rep.items["c"] = {worst_c <= tols.identity, worst_c, tols.identity};
  }

  // (d), (e) far-field asymptotics with the sgn(x y) alpha pattern
  {
    double worst_same = 0.0, worst_opposite = 0.0;
    for (int s = 0; s < 2500; ++s) {
      const double ax = rng.uniform(0.75 * R, 0.975 * R);
      const double ay = rng.uniform(0.75 * R, 0.975 * R);
      worst_same = std::max({worst_same, std::abs(u.eval_xy(ax, ay) - alpha),
                             std::abs(u.eval_xy(-ax, -ay) - alpha)});
      worst_opposite = std::max({worst_opposite, std::abs(u.eval_xy(-ax, ay) + alpha),
                                 std::abs(u.eval_xy(ax, -ay) + alpha)});
    }
    rep.items["d"] = {worst_same <= tols.asym * alpha, worst_same, tols.asym * alpha};
    rep.items["e"] = {worst_opposite <= tols.asym * alpha, worst_opposite, tols.asym * alpha};
  }

  // (f) gradient bound
  {
    const double gmax = std::sqrt(solution.problem->max_cell_grad_sq(solution.field));
    rep.items["f"] = {gmax <= std::sqrt(L), gmax, std::sqrt(L)};
  }

  rep.overall = std::all_of(rep.items.begin(), rep.items.end(),
                            [](const auto& kv) { return kv.second.pass; });
  return rep;
}

TheoremReport check_theorem2(const Solution& solution, double alpha, double L, int j,
                             const VerifyTols& tols, std::uint64_t seed) {
  require(solution.problem != nullptr, "check_theorem2: empty solution");
  require(solution.problem->grid().kind == GridKind::PolarSector,
          "check_theorem2: requires a polar-sector solution");
  require(solution.problem->grid().j == j, "check_theorem2: j does not match the solution");

  TheoremReport rep;
  rep.theorem = 2;
  rep.seed = seed;
  rep.solution_hash = solution_hash(solution);

  const ExtendedField u = extend_full(solution);
  const double R = solution.problem->grid().R;
  ProbeRng rng(seed);

  {
    const Extremes e = free_node_extremes(solution);
    ItemVerdict v;
    v.tol = 0.0;
    v.measured = std::min(e.min_v, alpha - e.max_v);
    v.pass = e.min_v > 0.0 && e.max_v < alpha;
    rep.items["a"] = v;
  }

  {
    double worst_b = 0.0, worst_c = 0.0;
    for (int s = 0; s < 10000; ++s) {
      const double rho = rng.uniform(0.0, R);
      const double th = rng.uniform(0.0, 2.0 * kPi);
      worst_b = std::max(worst_b, std::abs(u.eval_polar(rho, kPi / 2.0 + th) +
                                           u.eval_polar(rho, kPi / 2.0 - th)));
      worst_c = std::max(worst_c,
                         std::abs(u.eval_polar(rho, th + kPi / j) + u.eval_polar(rho, th)));
    }
    rep.items["b"] = {worst_b <= tols.identity, worst_b, tols.identity};
    rep.items["c"] = {worst_c <= tols.identity, worst_c, tols.identity};
  }

  // (d) sector bisectors at rho = 0.9 R: (-alpha)^{k+1}
  {
    double worst = 0.0;
    for (int k = 0; k < 2 * j; ++k) {
      const double th = kPi / 2.0 + (k + 0.5) * kPi / j;
      const double expected = (k % 2 == 0) ? -alpha : alpha;
      worst = std::max(worst, std::abs(u.eval_polar(0.9 * R, th) - expected));
    }
    rep.items["d"] = {worst <= tols.asym * alpha, worst, tols.asym * alpha};
  }

  {
    const double gmax = std::sqrt(solution.problem->max_cell_grad_sq(solution.field));
    rep.items["e"] = {gmax <= std::sqrt(L), gmax, std::sqrt(L)};
  }

  rep.overall = std::all_of(rep.items.begin(), rep.items.end(),
                            [](const auto& kv) { return kv.second.pass; });
  return rep;
}

TruncationReport truncation_consistency(const Solution& solution, double L) {
  require(solution.converged, "truncation_consistency: solution not converged");
  const Problem& p = *solution.problem;

  TruncationReport rep;
  rep.max_grad_sq = p.max_cell_grad_sq(solution.field);
  rep.margin = L - rep.max_grad_sq;
  rep.pass = rep.max_grad_sq <= L;
  if (!rep.pass) {
    rep.witness = Witness{std::sqrt(rep.max_grad_sq), "cell gradient above sqrt(L)"};
    rep.branch_identity_exact = false;
    return rep;
  }

  // Sample cell gradient magnitudes and certify that the first branch of
  // phi_L evaluates to exactly 1/sqrt(1 + g^2), i.e. the truncated operator
  // coincides with the prescribed mean curvature operator along this field.
  const NFunctionSpec& phi = p.phi();
  bool exact = true;
  const int samples = 512;
  for (int s = 0; s <= samples; ++s) {
    const double gsq = rep.max_grad_sq * s / samples;
    if (gsq > L) continue;
    if (phi.phi_of_sq(gsq) != 1.0 / std::sqrt(1.0 + gsq)) {
      exact = false;
      rep.witness = Witness{std::sqrt(gsq), "first-branch identity violated"};
      break;
    }
  }
  rep.branch_identity_exact = exact;
  rep.pass = rep.pass && exact;
  return rep;
}

}  // namespace curvwell
