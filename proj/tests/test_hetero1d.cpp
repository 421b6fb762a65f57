#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "curvwell/hetero1d.hpp"

using namespace curvwell;

namespace {

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

}  // namespace

TEST_CASE("solve_heteroclinic: boundary values, bounds, monotonicity") {
  SolveConfig cfg;
  const auto q = solve_heteroclinic(0.1, 1.0, 1.0, 80.0, 1600, cfg);
  CHECK(q.converged);
  CHECK(q.values.front() == 0.0);
  CHECK(q.values.back() == 0.1);
  CHECK(q.eval(40.0) >= 0.0999);
  for (int i = 0; i < q.n; ++i) {
    CHECK(q.values[i] >= 0.0);
    CHECK(q.values[i] <= 0.1);
    if (i > 0) CHECK(q.values[i] >= q.values[i - 1] - 1e-14);
  }
  CHECK(q.history.back().grad_inf <= 1e-10);
}

TEST_CASE("solve_heteroclinic: monotone energy descent from the tanh guess") {
  SolveConfig cfg;
  const auto q = solve_heteroclinic(0.2, 1.0, 1.0, 30.0, 600, cfg);
  for (std::size_t i = 1; i < q.history.size(); ++i) {
    CHECK(q.history[i].energy <= q.history[i - 1].energy);
  }
  // the recorded initial energy is the energy of the tanh initial guess
  const auto guess = tanh_profile(0.2, 30.0, 600);
  const double e_guess = profile_energy(guess, [](double) { return 1.0; });
  CHECK(q.history.back().energy <= e_guess + 1e-15);
  CHECK(q.history.front().energy == doctest::Approx(e_guess).epsilon(1e-12));
}

TEST_CASE("solve_heteroclinic: preconditions") {
  SolveConfig cfg;
  CHECK_THROWS_AS(solve_heteroclinic(0.1, 1.0, 1.0, 10.0, 1600, cfg), std::domain_error);
  CHECK_THROWS_AS(solve_heteroclinic(0.1, 1.0, 1.0, 80.0, 100, cfg), std::domain_error);
  CHECK_THROWS_AS(solve_heteroclinic(0.1, 1.0, -1.0, 80.0, 1600, cfg), std::domain_error);
  CHECK_THROWS_AS(solve_heteroclinic(0.1, 0.0, 1.0, 80.0, 1600, cfg), std::domain_error);
  SolveConfig tight;
  tight.max_iter = 3;
  CHECK_THROWS_AS(solve_heteroclinic(0.1, 1.0, 1.0, 80.0, 1600, tight), ConvergenceError);
  try {
    solve_heteroclinic(0.1, 1.0, 1.0, 80.0, 1600, tight);
  } catch (const ConvergenceError& e) {
    CHECK(e.history().size() >= 3);
  }
}

TEST_CASE("check_tanh_bracket on a solved profile") {
  SolveConfig cfg;
  const auto q = solve_heteroclinic(0.1, 1.0, 1.0, 80.0, 1600, cfg);
  const auto rep = check_tanh_bracket(q, 1e-4 * 0.1);
  CHECK(rep.lower_holds);
  CHECK(rep.min_slack >= -1e-4 * 0.1);
  CHECK(rep.kappa >= 1.0);

  // lower bound value oracle at t = 1: alpha tanh(alpha sqrt2)
  CHECK(0.1 * std::tanh(0.1 * kSqrt2) == doctest::Approx(0.0140486).epsilon(1e-5));

  // the bracket is not claimed for non-unit coefficients
  const auto q2 = solve_heteroclinic(0.1, 1.0, 2.0, 80.0, 1600, cfg);
  CHECK_THROWS_AS(check_tanh_bracket(q2, 1e-5), std::domain_error);
}

TEST_CASE("fit_decay on the exact tanh profile") {
  // alpha - alpha tanh(lambda t) ~ 2 alpha e^{-2 lambda t}, lambda = alpha sqrt2,
  // so theta2 must come out near 2 sqrt2 alpha.
  const auto p = tanh_profile(0.1, 80.0, 1600);
  const auto fit = fit_decay(p, 5.0, 25.0);
  CHECK(fit.theta2 == doctest::Approx(2.0 * kSqrt2 * 0.1).epsilon(0.02));
  CHECK(fit.theta1 > 0.0);
  CHECK(fit.beta2 == doctest::Approx(2.0 * kSqrt2 * 0.1).epsilon(0.05));
  CHECK(fit.kappa >= 1.0);

  // window shift: theta2 stable within 5% across the two half-windows
  const auto lo = fit_decay(p, 5.0, 15.0);
  const auto hi = fit_decay(p, 15.0, 25.0);
  CHECK(std::abs(lo.theta2 - hi.theta2) <= 0.05 * std::abs(hi.theta2));

  CHECK_THROWS_AS(fit_decay(p, 70.0, 79.0), std::domain_error);  // alpha - q underflows
  CHECK_THROWS_AS(fit_decay(p, -1.0, 10.0), std::domain_error);
}

TEST_CASE("discrete gradient matches difference quotients of the energy") {
  const Coefficient1D a = [](double t) { return 1.0 + 0.25 * std::cos(2.0 * 3.14159265358979 * t); };
  ProbeRng rng(99);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Profile1D p;
    p.T = 30.0;
    p.n = 256;
    p.alpha = 0.2;
    p.L = 1.0;
    p.converged = true;
    p.values.resize(p.n);
    p.values[0] = 0.0;
    p.values[p.n - 1] = p.alpha;
    for (int i = 1; i + 1 < p.n; ++i) p.values[i] = p.alpha * rng.uniform01();

    const auto g = profile_energy_gradient(p, a);
    double ginf = 0.0;
    for (double v : g) ginf = std::max(ginf, std::abs(v));

    for (int s = 0; s < 10; ++s) {
      const int i = 1 + static_cast<int>(rng.uniform01() * (p.n - 2));
      Profile1D pp = p, pm = p;
      const double eps = 1e-7;
      pp.values[i] += eps;
      pm.values[i] -= eps;
      const double fd = profile_energy_delta(pm, pp, a) / (pp.values[i] - pm.values[i]);
      worst = std::max(worst, std::abs(fd - g[i - 1]) / ginf);
    }
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("mesh doubling: second-order interior scheme") {
  SolveConfig cfg;
  const auto q400 = solve_heteroclinic(0.1, 1.0, 1.0, 80.0, 401, cfg);
  const auto q800 = solve_heteroclinic(0.1, 1.0, 1.0, 80.0, 801, cfg);
  const auto q1600 = solve_heteroclinic(0.1, 1.0, 1.0, 80.0, 1601, cfg);
  double d1 = 0.0, d2 = 0.0;
  for (int i = 0; i <= 400; ++i) {
    d1 = std::max(d1, std::abs(q400.values[i] - q800.values[2 * i]));
    d2 = std::max(d2, std::abs(q800.values[2 * i] - q1600.values[4 * i]));
  }
  const double order = std::log2(d1 / d2);
  CHECK(order >= 1.8);
}

TEST_CASE("profile eval and derivative") {
  const auto p = tanh_profile(0.1, 40.0, 801);
  CHECK(p.eval(0.0) == 0.0);
  CHECK(p.eval(45.0) == 0.1);  // clamps to alpha beyond T
  CHECK(p.eval(1.0) == doctest::Approx(0.1 * std::tanh(0.1 * kSqrt2)).epsilon(1e-6));
  CHECK_THROWS_AS(p.eval(-1.0), std::domain_error);
  // central difference at t = 20 against the analytic slope of the tanh
  const double t = p.node(400);
  const double sech = 1.0 / std::cosh(0.1 * kSqrt2 * t);
  CHECK(p.derivative(400) == doctest::Approx(0.01 * kSqrt2 * sech * sech).epsilon(1e-4));
}
