#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "curvwell/saddle2d.hpp"

using namespace curvwell;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.4142135623730951;

Profile1D tanh_profile(double alpha, double T, int n) {
  Profile1D p;
  p.T = T;
  p.n = n;
  p.alpha = alpha;
  p.L = 1.0;
  p.unit_coefficient = true;
  p.converged = true;
  p.values.resize(n);
  for (int i = 0; i < n; ++i) p.values[i] = alpha * std::tanh(alpha * kSqrt2 * p.node(i));
  p.values[n - 1] = alpha;
  return p;
}

std::shared_ptr<Problem> make_cart_problem(double alpha, double R, int n,
                                           const CoefficientField& coef) {
  auto grid = std::make_shared<Grid>(build_grid(R, n));
  const auto q = tanh_profile(alpha, std::max(2.0 * R, 8.0 / alpha), 4001);
  std::vector<double> far(n);
  for (int iy = 0; iy < n; ++iy) far[iy] = q.eval(iy * grid->h);
  far[0] = 0.0;
  return std::make_shared<Problem>(grid, NFunctionSpec::truncated_mean_curvature(1.0),
                                   Potential::quartic(alpha), coef, far);
}

std::shared_ptr<Problem> make_polar_problem(double alpha, double R, int n_rho, int n_theta, int j,
                                            double b) {
  auto grid = std::make_shared<Grid>(build_grid(R, n_rho, n_theta, j));
  const auto q = tanh_profile(alpha, std::max(R * kPi / (2.0 * j), 8.0 / alpha) + 1.0, 4001);
  std::vector<double> far(n_theta);
  for (int k = 0; k < n_theta; ++k) far[k] = q.eval(R * (kPi / 2.0 - grid->theta(k)));
  far[n_theta - 1] = 0.0;
  return std::make_shared<Problem>(grid, NFunctionSpec::truncated_mean_curvature(1.0),
                                   Potential::quartic(alpha), CoefficientField::constant(b), far);
}

Field random_smooth_field(const std::shared_ptr<const Grid>& grid, double alpha, uint64_t seed) {
  // random low-frequency modes in (x, y), clamped into the box
  ProbeRng rng(seed);
  const double a1 = rng.uniform(-1.0, 1.0), a2 = rng.uniform(-1.0, 1.0);
  const double w1 = rng.uniform(0.1, 0.5), w2 = rng.uniform(0.1, 0.5);
  const auto f = [&](double x, double y) {
    const double v = 0.5 + 0.4 * a1 * std::sin(w1 * x) + 0.4 * a2 * std::cos(w2 * y + 1.0);
    return std::clamp(alpha * v, 0.0, alpha);
  };
  Field fld;
  fld.grid = grid;
  fld.values.resize(grid->node_count());
  if (grid->kind == GridKind::QuadrantTriangle) {
    for (int iy = 0; iy < grid->n; ++iy)
      for (int ix = iy; ix < grid->n; ++ix)
        fld.values[grid->cart_index(ix, iy)] = f(ix * grid->h, iy * grid->h);
  } else {
    for (int k = 0; k < grid->n_theta; ++k)
      for (int i = 0; i < grid->n_rho; ++i)
        fld.values[grid->polar_index(i, k)] =
            f(grid->rho(i) * std::cos(grid->theta(k)), grid->rho(i) * std::sin(grid->theta(k)));
  }
  return fld;
}

}  // namespace

TEST_CASE("build_grid: quadrant triangle") {
  const Grid g = build_grid(40.0, 401);
  CHECK(g.h == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(g.node_count() == 401 * 402 / 2);
  int nodal = 0, mirror = 0, far = 0;
  for (auto r : g.roles) {
    nodal += r == BoundaryRole::NodalZero;
    mirror += r == BoundaryRole::Mirror;
    far += r == BoundaryRole::FarDirichlet;
  }
  CHECK(nodal == 401);       // the y = 0 edge
  CHECK(far == 400);         // x = R minus the shared nodal corner
  CHECK(mirror == 399);      // diagonal minus both shared corners
  CHECK_THROWS_AS(build_grid(0.0, 401), std::domain_error);
  CHECK_THROWS_AS(build_grid(40.0, 32), std::domain_error);
}

TEST_CASE("build_grid: polar sector") {
  const Grid g = build_grid(40.0, 401, 65, 2);
  CHECK(g.theta_lo == doctest::Approx(kPi / 4.0).epsilon(1e-15));
  CHECK(g.theta(g.n_theta - 1) == doctest::Approx(kPi / 2.0).epsilon(1e-12));
  CHECK(g.node_count() == 401 * 65);
  CHECK_THROWS_AS(build_grid(40.0, 401, 65, 1), std::domain_error);
  CHECK_THROWS_AS(build_grid(40.0, 401, 32, 2), std::domain_error);
}

TEST_CASE("initial guess: nodal zeros, clamping, far corner") {
  auto grid = std::make_shared<Grid>(build_grid(40.0, 101));
  const auto q = tanh_profile(0.1, 80.0, 1601);
  const Field u0 = initial_guess(grid, 0.1, q);
  for (int ix = 0; ix < grid->n; ++ix) CHECK(u0.values[grid->cart_index(ix, 0)] == 0.0);
  for (double v : u0.values) {
    CHECK(v >= 0.0);
    CHECK(v <= 0.1);
  }
  // diagonal far corner: q(R)^2/alpha -> alpha
  CHECK(u0.values[grid->cart_index(100, 100)] == doctest::Approx(0.1).epsilon(1e-4));
  CHECK_THROWS_AS(initial_guess(grid, 0.2, q), std::domain_error);
}

TEST_CASE("energy: zero and constant fields") {
  const double alpha = 0.1;
  auto prob = make_cart_problem(alpha, 40.0, 401, CoefficientField::constant(1.0));

  Field zero;
  zero.grid = prob->grid_ptr();
  zero.values.assign(prob->grid().node_count(), 0.0);
  // V(0) * triangle area = alpha^4 R^2/2 (far column is substituted from the
  // problem data, so the strip of cells at x = R contributes gradient energy)
  const double e0 = prob->energy(zero);
  const double pot_part = 1e-4 * (40.0 * 40.0 / 2.0);
  CHECK(e0 >= pot_part);
  CHECK(e0 <= pot_part * (1.0 + 2e-3));

  // alpha field with all-alpha far data: exactly zero energy
  auto grid = prob->grid_ptr();
  std::vector<double> far_alpha(grid->n, alpha);
  auto prob2 = std::make_shared<Problem>(grid, NFunctionSpec::truncated_mean_curvature(1.0),
                                         Potential::quartic(alpha),
                                         CoefficientField::constant(1.0), far_alpha);
  Field flat;
  flat.grid = grid;
  flat.values.assign(grid->node_count(), alpha);
  CHECK(prob2->energy(flat) == 0.0);

  // quadrature weights tile the triangle exactly
  CHECK(prob->cell_area_total() == doctest::Approx(800.0).epsilon(1e-12));
}

TEST_CASE("energy: pure potential term on the zero field, interior-only check") {
  // On a grid whose far data is also zero, u = 0 gives exactly V(0)*area.
  const double alpha = 0.1;
  auto grid = std::make_shared<Grid>(build_grid(20.0, 65));
  std::vector<double> far(65, 0.0);
  auto prob = std::make_shared<Problem>(grid, NFunctionSpec::truncated_mean_curvature(1.0),
                                        Potential::quartic(alpha), CoefficientField::constant(1.0),
                                        far);
  Field zero;
  zero.grid = grid;
  zero.values.assign(grid->node_count(), 0.0);
  CHECK(prob->energy(zero) == doctest::Approx(1e-4 * 200.0).epsilon(1e-12));
  CHECK(prob->cell_area_total() == doctest::Approx(200.0).epsilon(1e-12));
}

TEST_CASE("polar quadrature weights tile the sector") {
  for (int j : {2, 3, 4}) {
    auto prob = make_polar_problem(0.1, 30.0, 65, 65, j, 1.0);
    CHECK(prob->cell_area_total() ==
          doctest::Approx((kPi / (2.0 * j)) * 30.0 * 30.0 / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("energy gradient matches difference quotients, both grid kinds") {
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    for (int kind = 0; kind < 2; ++kind) {
      auto prob = kind == 0 ? make_cart_problem(0.1, 10.0, 65, CoefficientField::periodic_model(2.0))
                            : make_polar_problem(0.1, 10.0, 65, 65, 3, 1.0);
      Field f = random_smooth_field(prob->grid_ptr(), 0.1, 1000 + 10 * trial + kind);
      std::vector<double> g;
      prob->energy_gradient(f, g);
      double ginf = 0.0;
      for (double v : g) ginf = std::max(ginf, std::abs(v));

      ProbeRng rng(777 + trial + kind);
      for (int s = 0; s < 40; ++s) {
        const auto& free = prob->free_nodes();
        const int idx = free[static_cast<std::size_t>(rng.uniform01() * free.size())];
        Field fp = f, fm = f;
        const double eps = 1e-7;
        fp.values[idx] += eps;
        fm.values[idx] -= eps;
        const double fd = prob->energy_delta(fm, fp) / (fp.values[idx] - fm.values[idx]);
        worst = std::max(worst, std::abs(fd - g[idx]) / ginf);
      }
    }
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("gradient is zero at constrained nodes and for u=0 interior") {
  auto prob = make_cart_problem(0.1, 10.0, 65, CoefficientField::periodic_model(2.0));
  Field zero;
  zero.grid = prob->grid_ptr();
  zero.values.assign(prob->grid().node_count(), 0.0);
  std::vector<double> g;
  prob->energy_gradient(zero, g);
  const Grid& grid = prob->grid();
  // constrained slots stay zero; interior away from the far strip sees
  // V'(0) = 0 and no flux
  for (int ix = 0; ix < grid.n; ++ix) {
    CHECK(g[grid.cart_index(ix, 0)] == 0.0);
  }
  for (int iy = 1; iy < grid.n - 2; ++iy) {
    for (int ix = iy; ix < grid.n - 2; ++ix) {
      CHECK(g[grid.cart_index(ix, iy)] == 0.0);
    }
  }
}

TEST_CASE("minimize: critical init, descent, run-to-run energy agreement") {
  const double alpha = 0.1;
  auto grid = std::make_shared<Grid>(build_grid(20.0, 65));
  std::vector<double> far_alpha(65, alpha);
  auto prob = std::make_shared<Problem>(grid, NFunctionSpec::truncated_mean_curvature(1.0),
                                        Potential::quartic(alpha),
                                        CoefficientField::constant(1.0), far_alpha);
  Field flat;
  flat.grid = grid;
  flat.values.assign(grid->node_count(), alpha);
  const Solution at_min = minimize(prob, flat);
  CHECK(at_min.converged);
  CHECK(at_min.history.size() == 1);  // already critical, zero iterations

  // a genuine solve: two different feasible inits agree in energy
  auto prob2 = make_cart_problem(alpha, 20.0, 81, CoefficientField::constant(1.0));
  const auto q = tanh_profile(alpha, 80.0, 1601);
  const Field init1 = initial_guess(prob2->grid_ptr(), alpha, q);
  Field init2;
  init2.grid = prob2->grid_ptr();
  init2.values.assign(prob2->grid().node_count(), 0.5 * alpha);
  const Solution s1 = minimize(prob2, init1);
  const Solution s2 = minimize(prob2, init2);
  CHECK(s1.converged);
  CHECK(s2.converged);
  const double e1 = s1.history.back().energy;
  const double e2 = s2.history.back().energy;
  CHECK(std::abs(e1 - e2) <= 1e-8 * std::abs(e1));
  for (std::size_t i = 1; i < s1.history.size(); ++i) {
    CHECK(s1.history[i].energy <= s1.history[i - 1].energy);
  }
  // box invariance of the converged field
  for (int idx : prob2->free_nodes()) {
    CHECK(s1.field.values[idx] > 0.0);
    CHECK(s1.field.values[idx] < alpha);
  }

  // exhausting max_iter reports rather than throws
  SolveConfig tight;
  tight.max_iter = 2;
  const Solution stuck = minimize(prob2, init2, tight);
  CHECK_FALSE(stuck.converged);
}

TEST_CASE("solve_saddle rejects asymmetric coefficients") {
  std::vector<double> xs, ys;
  for (int i = 0; i <= 16; ++i) xs.push_back(i / 16.0);
  ys = xs;
  std::vector<double> vals;
  for (double y : ys)
    for (double x : xs) vals.push_back(x + 2.0 + 0.0 * y);
  CHECK_THROWS_AS(solve_saddle(0.1, 1.0, CoefficientField::tabulated(xs, ys, vals), 20.0, 65, {}),
                  std::domain_error);
}

TEST_CASE("solve_pizza rejects j < 2") {
  CHECK_THROWS_AS(solve_pizza(0.1, 1.0, 1.0, 1, 20.0, 65, 65, {}), std::domain_error);
}

TEST_CASE("extend_full: group identities and nodal zeros") {
  const Solution sad = solve_saddle(0.1, 1.0, CoefficientField::periodic_model(2.0), 20.0, 81, {});
  REQUIRE(sad.converged);
  const ExtendedField u = extend_full(sad);
  ProbeRng rng(kDefaultProbeSeed);
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.uniform(-20.0, 20.0);
    const double y = rng.uniform(-20.0, 20.0);
    const double v = u.eval_xy(x, y);
    CHECK(u.eval_xy(-x, y) == -v);
    CHECK(u.eval_xy(x, -y) == -v);
    CHECK(u.eval_xy(y, x) == v);
  }
  CHECK(u.eval_xy(0.0, 13.7) == 0.0);
  CHECK(u.eval_xy(-4.2, 0.0) == 0.0);
  CHECK_THROWS_AS(u.eval_xy(25.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(u.eval_polar(1.0, 0.0), std::domain_error);  // Cartesian solution

  const Solution piz = solve_pizza(0.1, 1.0, 1.0, 3, 20.0, 81, 65, {});
  REQUIRE(piz.converged);
  const ExtendedField w = extend_full(piz);
  for (int i = 0; i < 10000; ++i) {
    const double rho = rng.uniform(0.0, 20.0);
    const double th = rng.uniform(0.0, 2.0 * kPi);
    const double v = w.eval_polar(rho, th);
    CHECK(std::abs(w.eval_polar(rho, th + kPi / 3.0) + v) <= 1e-13);
    CHECK(std::abs(w.eval_polar(rho, kPi - th) + v) <= 1e-13);
  }
  CHECK(w.eval_polar(5.0, kPi / 2.0) == 0.0);
  CHECK(w.eval_polar(0.0, 1.2345) == 0.0);
  CHECK_THROWS_AS(w.eval_polar(21.0, 0.0), std::domain_error);

  Solution unconverged = sad;
  unconverged.converged = false;
  CHECK_THROWS_AS(extend_full(unconverged), std::domain_error);
}

TEST_CASE("j=2 pizza matches the constant-coefficient saddle at shared probes") {
  const Solution sad = solve_saddle(0.1, 1.0, CoefficientField::constant(1.0), 20.0, 81, {});
  const Solution piz = solve_pizza(0.1, 1.0, 1.0, 2, 20.0, 81, 65, {});
  REQUIRE(sad.converged);
  REQUIRE(piz.converged);
  const ExtendedField us = extend_full(sad), up = extend_full(piz);
  const double h = 20.0 / 80.0;
  const double gmax = std::sqrt(sad.problem->max_cell_grad_sq(sad.field));
  ProbeRng rng(kDefaultProbeSeed);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double rho = rng.uniform(0.0, 0.95 * 20.0);
    const double th = rng.uniform(0.0, 2.0 * kPi);
    worst = std::max(worst, std::abs(us.eval_xy(rho * std::cos(th), rho * std::sin(th)) -
                                     up.eval_xy(rho * std::cos(th), rho * std::sin(th))));
  }
  CHECK(worst <= 3.0 * h * gmax);
}

TEST_CASE("deterministic energy across thread counts") {
  auto prob = make_cart_problem(0.1, 10.0, 65, CoefficientField::periodic_model(2.0));
  Field f = random_smooth_field(prob->grid_ptr(), 0.1, 4242);
  const double e1 = prob->energy(f);
  std::vector<double> g1;
  prob->energy_gradient(f, g1);
  setenv("CURVWELL_THREADS", "4", 1);
  const double e4 = prob->energy(f);
  std::vector<double> g4;
  prob->energy_gradient(f, g4);
  setenv("CURVWELL_THREADS", "1", 1);
  CHECK(e1 == e4);
  CHECK(g1 == g4);
}
