#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "curvwell/nfunc.hpp"

using namespace curvwell;

namespace {

// Independent quadrature oracle for Phi(t) = int_0^t phi(s) s ds: composite
// Simpson per smooth piece, split at the branch knots sqrt(L), sqrt(L+1).
double big_phi_quadrature(const NFunctionSpec& spec, double t) {
  std::vector<double> knots{0.0};
  if (spec.kind() == NFunctionKind::TruncatedMeanCurvature) {
    const double L = spec.level();
    if (std::sqrt(L) < t) knots.push_back(std::sqrt(L));
    if (std::sqrt(L + 1) < t) knots.push_back(std::sqrt(L + 1));
  }
  knots.push_back(t);
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < knots.size(); ++p) {
    const double a = knots[p], b = knots[p + 1];
    const int m = 2000;  // even
    const double h = (b - a) / m;
    double sum = 0.0;
    for (int i = 0; i <= m; ++i) {
      const double s = a + i * h;
      const double f = spec.phi(s) * s;
      sum += (i == 0 || i == m) ? f : (i % 2 == 1 ? 4.0 * f : 2.0 * f);
    }
    total += sum * h / 3.0;
  }
  return total;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
  return g;
}

}  // namespace

TEST_CASE("truncation constants") {
  const auto c1 = truncation_constants(1.0);
  // oracle: direct substitution x_L = (1+L)^{-3/2}/4, y_L = (4L+3) x_L
  CHECK(c1.x_L == doctest::Approx(0.08838834764831845).epsilon(1e-15));
  CHECK(c1.y_L == doctest::Approx(0.6187184335382291).epsilon(1e-15));

  const auto c3 = truncation_constants(3.0);
  CHECK(c3.x_L == doctest::Approx(1.0 / 32.0).epsilon(1e-15));
  CHECK(c3.y_L == doctest::Approx(15.0 / 32.0).epsilon(1e-15));

  ProbeRng rng(42);
  for (int i = 0; i < 50; ++i) {
    const double L = rng.uniform(1e-3, 50.0);
    const auto c = truncation_constants(L);
    CHECK(c.y_L == 1.0 * (4.0 * L + 3.0) * c.x_L);  // y_L = (4L+3) x_L exactly
    CHECK(c.x_L > 0.0);
    CHECK(std::isfinite(c.y_L));
  }

  CHECK_THROWS_AS(truncation_constants(0.0), std::domain_error);
  CHECK_THROWS_AS(truncation_constants(-1.0), std::domain_error);
  CHECK_THROWS_AS(truncation_constants(std::nan("")), std::domain_error);
}

TEST_CASE("phi branches, truncated kind") {
  const auto spec = NFunctionSpec::truncated_mean_curvature(1.0);
  CHECK(spec.phi(0.0) == 1.0);
  CHECK(spec.phi(1.0) == doctest::Approx(0.7071067811865475).epsilon(1e-15));
  // middle branch at t^2 = 1.5: x_L * 0.25 + y_L
  CHECK(spec.phi(std::sqrt(1.5)) == doctest::Approx(0.6408155204503087).epsilon(1e-13));
  CHECK(spec.phi(10.0) == doctest::Approx(0.6187184335382291).epsilon(1e-15));
  CHECK_THROWS_AS(spec.phi(-0.5), std::domain_error);
}

TEST_CASE("phi power-law kind") {
  const auto spec = NFunctionSpec::power_law(1.5);
  CHECK(spec.phi(4.0) == doctest::Approx(0.5).epsilon(1e-15));  // 4^{-1/2}
  CHECK_THROWS_AS(spec.phi(0.0), SingularityError);
  CHECK_THROWS_AS(spec.phi(-1.0), std::domain_error);
  CHECK_THROWS_AS(NFunctionSpec::power_law(1.0), std::domain_error);
  CHECK_THROWS_AS(NFunctionSpec::power_law(2.5), std::domain_error);
}

TEST_CASE("big_phi closed form and sandwich") {
  const auto spec = NFunctionSpec::truncated_mean_curvature(1.0);
  CHECK(spec.big_phi(0.0) == 0.0);
  CHECK(spec.big_phi(1.0) == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-15));
  CHECK(spec.big_phi(-1.0) == spec.big_phi(1.0));  // even
  // Lemma-style sandwich at t = 1: y_L t^2/2 <= Phi <= t^2/2
  CHECK(spec.y_L() * 0.5 <= spec.big_phi(1.0));
  CHECK(spec.big_phi(1.0) <= 0.5);
}

TEST_CASE("big_phi agrees with quadrature") {
  for (double L : {0.5, 1.0, 3.0}) {
    const auto spec = NFunctionSpec::truncated_mean_curvature(L);
    const double tmax = 3.0 * std::sqrt(L + 1.0);
    for (int i = 1; i <= 12; ++i) {
      const double t = tmax * i / 12.0;
      const double q = big_phi_quadrature(spec, t);
      CHECK(spec.big_phi(t) == doctest::Approx(q).epsilon(1e-8));
    }
  }
}

TEST_CASE("C1 fit at the branch knots") {
  for (double L : {0.5, 1.0, 3.0, 10.0}) {
    const auto c = truncation_constants(L);
    // left/right values and derivatives of phihat at u = L and u = L+1
    const double left_v = 1.0 / std::sqrt(1.0 + L);
    const double right_v = c.x_L * 1.0 + c.y_L;
    CHECK(std::abs(left_v - right_v) <= 1e-12 * left_v);
    const double left_d = -0.5 * std::pow(1.0 + L, -1.5);
    const double right_d = 2.0 * c.x_L * (-1.0);
    CHECK(std::abs(left_d - right_d) <= 1e-12 * std::abs(left_d));
    // u = L+1: quadratic meets the flat branch with zero slope
    CHECK(c.x_L * 0.0 + c.y_L == c.y_L);
  }
}

TEST_CASE("phi and big_phi bounds at random samples") {
  ProbeRng rng(0xBEEF);
  for (int i = 0; i < 10000; ++i) {
    const double L = rng.uniform(0.1, 20.0);
    const double t = rng.uniform(0.0, 4.0 * std::sqrt(L + 1));
    const auto spec = NFunctionSpec::truncated_mean_curvature(L);
    const double p = spec.phi(t);
    CHECK(p >= spec.y_L() - 1e-15);
    CHECK(p <= 1.0 + 1e-15);
    const double bp = spec.big_phi(t);
    CHECK(bp >= spec.y_L() * t * t / 2.0 - 1e-12 * (1 + t * t));
    CHECK(bp <= t * t / 2.0 + 1e-12 * (1 + t * t));
  }
}

TEST_CASE("phi t strictly increasing, Phi midpoint-convex, phi non-increasing") {
  const auto spec = NFunctionSpec::truncated_mean_curvature(1.0);
  const auto grid = log_grid(1e-4, 10.0, 400);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    CHECK(spec.phi(grid[i]) * grid[i] > spec.phi(grid[i - 1]) * grid[i - 1]);
    CHECK(spec.phi(grid[i]) <= spec.phi(grid[i - 1]) + 1e-15);
  }
  ProbeRng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double s = rng.uniform(0.0, 5.0);
    const double t = rng.uniform(0.0, 5.0);
    const double mid = spec.big_phi(0.5 * (s + t));
    CHECK(mid <= 0.5 * (spec.big_phi(s) + spec.big_phi(t)) + 1e-14);
  }
}

TEST_CASE("zeta value and derivative") {
  ZetaParams zp{0.05, 0.01, 5.0, 1.0};
  const double c = zp.center();
  CHECK(c == doctest::Approx(2.875).epsilon(1e-15));
  const auto at_c = zeta(zp, c);
  CHECK(at_c.value == doctest::Approx(0.05 / std::cosh(0.01 * 1.875)).epsilon(1e-14));
  CHECK(at_c.value == doctest::Approx(0.0499912).epsilon(1e-5));
  CHECK(at_c.derivative == 0.0);
  // derivative sign around the center, value at c +- half width equals delta
  CHECK(zeta(zp, c - 1.0).derivative < 0.0);
  CHECK(zeta(zp, c + 1.0).derivative > 0.0);
  const double halfw = (zp.j - 0.25 - zp.L) / 2.0;
  CHECK(zeta(zp, c + halfw).value == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(zeta(zp, c - halfw).value == doctest::Approx(0.05).epsilon(1e-14));
  for (double t : {-3.0, 0.0, 2.875, 10.0}) CHECK(zeta(zp, t).value > 0.0);

  ZetaParams bad{0.05, 0.01, 1.0, 1.0};  // j - 1/4 - L <= 0
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
}

TEST_CASE("check_phi_conditions, truncated kind") {
  const auto spec = NFunctionSpec::truncated_mean_curvature(1.0);
  const auto grid = log_grid(1e-4, 10.0, 200);
  const auto rep = check_phi_conditions(spec, grid);
  CHECK(rep.pass);
  CHECK(rep.condition == "phi-conditions");
  CHECK(rep.constants.at("m") - 1.0 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rep.constants.at("l") - 1.0 == doctest::Approx(0.5).epsilon(0.05));
  CHECK(rep.constants.at("s") == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(rep.constants.at("l") <= rep.constants.at("m"));
  CHECK_FALSE(rep.witness.has_value());
}

TEST_CASE("check_phi_conditions, power-law kind fails the 0+ boundedness probe") {
  const auto spec = NFunctionSpec::power_law(1.5);
  const auto grid = log_grid(1e-4, 10.0, 200);
  const auto rep = check_phi_conditions(spec, grid);
  CHECK_FALSE(rep.pass);
  REQUIRE(rep.witness.has_value());
  CHECK(rep.witness->point == doctest::Approx(1e-4).epsilon(1e-12));
  // the growth pieces themselves are healthy: fitted s = p and flat ratio
  CHECK(rep.constants.at("s") == doctest::Approx(1.5).epsilon(1e-3));
  CHECK(rep.constants.at("m") == doctest::Approx(1.5).epsilon(1e-3));
}

TEST_CASE("check_phi_conditions input validation") {
  const auto spec = NFunctionSpec::truncated_mean_curvature(1.0);
  CHECK_THROWS_AS(check_phi_conditions(spec, std::vector<double>{}), std::domain_error);
  CHECK_THROWS_AS(check_phi_conditions(spec, std::vector<double>{1.0, 0.5}), std::domain_error);
  CHECK_THROWS_AS(check_phi_conditions(spec, std::vector<double>{-1.0, 1.0}), std::domain_error);
}

namespace {

std::vector<double> tilde_grid(const ZetaParams& zp) {
  const double c = zp.center();
  std::vector<double> g;
  for (int i = 0; i <= 1000; ++i) g.push_back(c - 2.0 + 4.0 * i / 1000.0);
  for (int k = 3; k <= 9; ++k) {
    g.push_back(c - std::pow(10.0, -k));
    g.push_back(c + std::pow(10.0, -k));
  }
  std::sort(g.begin(), g.end());
  return g;
}

}  // namespace

TEST_CASE("check_tilde_phi4 dichotomy") {
  ZetaParams zp{0.05, 0.01, 5.0, 1.0};
  const auto grid = tilde_grid(zp);

  const auto trunc = NFunctionSpec::truncated_mean_curvature(1.0);
  const auto ok = check_tilde_phi4(trunc, zp, 1.0, grid);
  CHECK(ok.pass);
  CHECK(ok.constants.at("supRatio") <= 1.0 / trunc.y_L() + 1e-12);
  CHECK(ok.constants.at("kappa1") == doctest::Approx(1.6162440667747087).epsilon(1e-12));

  const auto power = NFunctionSpec::power_law(1.5);
  const auto bad = check_tilde_phi4(power, zp, 1.0, grid);
  CHECK_FALSE(bad.pass);
  CHECK(bad.constants.at("supRatio") > 1e6);
  REQUIRE(bad.witness.has_value());
  CHECK(std::abs(bad.witness->point - zp.center()) <= 1e-6);
}

TEST_CASE("check_tilde_phi4 requires the grid to straddle the critical point") {
  ZetaParams zp{0.05, 0.01, 5.0, 1.0};
  const auto spec = NFunctionSpec::truncated_mean_curvature(1.0);
  std::vector<double> off{0.0, 1.0, 2.0};  // center is 2.875
  CHECK_THROWS_AS(check_tilde_phi4(spec, zp, 1.0, off), std::domain_error);
  CHECK_THROWS_AS(check_tilde_phi4(spec, zp, 0.0, tilde_grid(zp)), std::domain_error);
}
