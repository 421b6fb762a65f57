#include "curvwell/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace curvwell {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void require(bool cond, const char* msg) {
  if (!cond) throw std::domain_error(msg);
}

// Linear interpolation of (xs, ys) at x; xs strictly increasing.
double interp1(std::span<const double> xs, std::span<const double> ys, double x) {
  if (x < xs.front() || x > xs.back()) throw std::domain_error("tabulated evaluation out of range");
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - xs.begin()), xs.size() - 1);
  const std::size_t lo = hi == 0 ? 0 : hi - 1;
  if (hi == lo) return ys[lo];
  const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return (1.0 - w) * ys[lo] + w * ys[hi];
}

double wrap_into(double t, double lo, double extent) {
  double r = std::fmod(t - lo, extent);
  if (r < 0.0) r += extent;
  return lo + r;
}

}  // namespace

Potential Potential::quartic(double alpha) {
  require(std::isfinite(alpha) && alpha > 0.0, "potential: alpha must be positive");
  Potential p;
  p.form_ = Form::Quartic;
  p.alpha_ = alpha;
  return p;
}

Potential Potential::tabulated(double alpha, std::vector<double> t, std::vector<double> v,
                               std::vector<double> v1, std::vector<double> v2) {
  require(alpha > 0.0, "potential: alpha must be positive");
  require(t.size() >= 2 && t.size() == v.size() && t.size() == v1.size() && t.size() == v2.size(),
          "potential: tabulated columns must align with at least 2 rows");
  for (std::size_t i = 1; i < t.size(); ++i) {
    require(t[i] > t[i - 1], "potential: tabulated t column must be strictly increasing");
  }
  Potential p;
  p.form_ = Form::Tabulated;
  p.alpha_ = alpha;
  p.tab_t_ = std::move(t);
  p.tab_v_ = std::move(v);
  p.tab_v1_ = std::move(v1);
  p.tab_v2_ = std::move(v2);
  return p;
}

double Potential::eval(double t, int order) const {
  if (form_ == Form::Quartic) {
    const double a2 = alpha_ * alpha_;
    switch (order) {
      case 0: {
        const double d = t * t - a2;
        return d * d;
      }
      case 1:
        return 4.0 * t * (t * t - a2);
      case 2:
        return 12.0 * t * t - 4.0 * a2;
      default:
        throw std::domain_error("potential_eval: order must be 0, 1 or 2");
    }
  }
  switch (order) {
    case 0:
      return interp1(tab_t_, tab_v_, t);
    case 1:
      return interp1(tab_t_, tab_v1_, t);
    case 2:
      return interp1(tab_t_, tab_v2_, t);
    default:
      throw std::domain_error("potential_eval: order must be 0, 1 or 2");
  }
}

double potential_eval(const Potential& pot, double t, int order) { return pot.eval(t, order); }

CoefficientField CoefficientField::constant(double b) {
  require(std::isfinite(b) && b > 0.0, "coefficient: constant b must be positive");
  CoefficientField f;
  f.kind_ = CoefficientKind::Constant;
  f.b_ = b;
  return f;
}

CoefficientField CoefficientField::periodic_model(double c) {
  require(std::isfinite(c) && c > 1.0, "coefficient: periodic model requires c > 1");
  CoefficientField f;
  f.kind_ = CoefficientKind::PeriodicModel;
  f.c_ = c;
  return f;
}

CoefficientField CoefficientField::tabulated(std::vector<double> xs, std::vector<double> ys,
                                             std::vector<double> values) {
  require(xs.size() >= 2 && ys.size() >= 2, "coefficient: tabulated grid needs >= 2 nodes per axis");
  require(values.size() == xs.size() * ys.size(), "coefficient: tabulated values must fill the lattice");
  for (std::size_t i = 1; i < xs.size(); ++i) require(xs[i] > xs[i - 1], "coefficient: x grid not increasing");
  for (std::size_t i = 1; i < ys.size(); ++i) require(ys[i] > ys[i - 1], "coefficient: y grid not increasing");
  CoefficientField f;
  f.kind_ = CoefficientKind::Tabulated;
  f.xs_ = std::move(xs);
  f.ys_ = std::move(ys);
  f.vals_ = std::move(values);
  f.period_x_ = f.xs_.back() - f.xs_.front();
  f.period_y_ = f.ys_.back() - f.ys_.front();
  return f;
}

double CoefficientField::constant_value() const {
  require(kind_ == CoefficientKind::Constant, "constant_value() requires the constant kind");
  return b_;
}

double CoefficientField::model_offset() const {
  require(kind_ == CoefficientKind::PeriodicModel, "model_offset() requires the periodic-model kind");
  return c_;
}

double CoefficientField::eval(double x, double y) const {
  switch (kind_) {
    case CoefficientKind::Constant:
      return b_;
    case CoefficientKind::PeriodicModel:
      return std::cos(2.0 * kPi * x) * std::cos(2.0 * kPi * y) + c_;
    case CoefficientKind::Tabulated: {
      if (x < xs_.front() || x > xs_.back() || y < ys_.front() || y > ys_.back()) {
        throw std::domain_error("coefficient: tabulated evaluation out of range");
      }
      const auto cell = [](std::span<const double> g, double v) {
        auto it = std::upper_bound(g.begin(), g.end(), v);
        std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - g.begin()), g.size() - 1);
        std::size_t lo = hi == 0 ? 1 : hi;
        return lo;  // index of the upper node, >= 1
      };
      const std::size_t ix = cell(xs_, x);
      const std::size_t iy = cell(ys_, y);
      const double wx = (x - xs_[ix - 1]) / (xs_[ix] - xs_[ix - 1]);
      const double wy = (y - ys_[iy - 1]) / (ys_[iy] - ys_[iy - 1]);
      const auto at = [&](std::size_t i, std::size_t j) { return vals_[j * xs_.size() + i]; };
      return (1 - wx) * (1 - wy) * at(ix - 1, iy - 1) + wx * (1 - wy) * at(ix, iy - 1) +
             (1 - wx) * wy * at(ix - 1, iy) + wx * wy * at(ix, iy);
    }
  }
  throw std::domain_error("coefficient: unknown kind");
}

double CoefficientField::eval_periodic(double x, double y) const {
  if (kind_ != CoefficientKind::Tabulated) return eval(x, y);
  return eval(wrap_into(x, xs_.front(), period_x_), wrap_into(y, ys_.front(), period_y_));
}

double CoefficientField::line_average(double t) const {
  switch (kind_) {
    case CoefficientKind::Constant:
      return b_;
    case CoefficientKind::PeriodicModel:
      // cos(2 pi y) integrates to zero over one period.
      return c_;
    case CoefficientKind::Tabulated: {
      const int m = 256;
      const double x = wrap_into(t, xs_.front(), period_x_);
      double sum = 0.5 * (eval(x, ys_.front()) + eval(x, ys_.back()));
      for (int k = 1; k < m; ++k) {
        sum += eval(x, ys_.front() + period_y_ * k / m);
      }
      return sum / m;
    }
  }
  throw std::domain_error("coefficient: unknown kind");
}

const std::vector<double>& CoefficientField::table_xs() const {
  require(kind_ == CoefficientKind::Tabulated, "table_xs() requires the tabulated kind");
  return xs_;
}

const std::vector<double>& CoefficientField::table_ys() const {
  require(kind_ == CoefficientKind::Tabulated, "table_ys() requires the tabulated kind");
  return ys_;
}

const std::vector<double>& CoefficientField::table_values() const {
  require(kind_ == CoefficientKind::Tabulated, "table_values() requires the tabulated kind");
  return vals_;
}

double coefficient_eval(const CoefficientField& field, double x, double y) {
  return field.eval(x, y);
}

ConditionReport check_potential_family(std::span<const double> alphas, double lambda,
                                       const NFunctionSpec& phi_spec) {
  require(std::isfinite(lambda) && lambda > 0.0, "check_potential_family: lambda must be positive");
  require(!alphas.empty(), "check_potential_family: no alphas supplied");
  for (double a : alphas) {
    require(a > 0.0 && a < lambda, "check_potential_family: alphas must lie in (0, lambda)");
  }

  ConditionReport rep;
  rep.condition = "potential-family";
  const double c_lambda = 8.0 / (3.0 * std::sqrt(3.0)) * lambda * lambda * lambda;
  rep.constants["C"] = c_lambda;

  bool ok = true;
  double v3_max = 0.0;
  double w1 = std::numeric_limits<double>::infinity(), w2 = 0.0;
  double omega1 = std::numeric_limits<double>::infinity(), omega3 = 0.0;

  for (double alpha : alphas) {
    const Potential pot = Potential::quartic(alpha);

    // (V3): dense scan of |V'| on [-alpha, alpha], plus the interior
    // stationary point t = alpha/sqrt(3) where the quartic max sits.
    const int m = 1000;
    double vmax = std::abs(pot.eval(alpha / std::sqrt(3.0), 1));
    for (int i = 0; i <= m; ++i) {
      const double t = -alpha + 2.0 * alpha * i / m;
      vmax = std::max(vmax, std::abs(pot.eval(t, 1)));
    }
    v3_max = std::max(v3_max, vmax);
    if (!(vmax <= c_lambda + 1e-12)) {
      ok = false;
      if (!rep.witness) rep.witness = Witness{alpha, "(V3) bound exceeded"};
    }

    // (V4)/(V5) envelopes on |t - alpha| <= alpha/4.
    const int k = 256;
    const double window = alpha / 4.0;
    for (int i = 0; i <= k; ++i) {
      const double dt = -window + 2.0 * window * i / k;
      if (std::abs(dt) < 1e-6 * alpha) continue;  // 0/0 at the well
      const double t = alpha + dt;
      const double r4 = pot.eval(t, 0) / phi_spec.big_phi(std::abs(dt));
      w1 = std::min(w1, r4);
      w2 = std::max(w2, r4);
      if (t > 0.0) {
        const double denom = -phi_spec.phi(std::abs(dt)) * (alpha - t) * t;
        const double r5 = pot.eval(t, 1) / denom;
        omega1 = std::min(omega1, r5);
        omega3 = std::max(omega3, r5);
      }
    }
  }

  rep.constants["maxV1"] = v3_max;
  rep.constants["w1"] = w1;
  rep.constants["w2"] = w2;
  rep.constants["omega1"] = omega1;
  rep.constants["omega2"] = 1.0;
  rep.constants["omega3"] = omega3;
  rep.constants["omega4"] = 1.0;

  const bool fits_ok = w1 > 0.0 && std::isfinite(w2) && omega1 > 0.0 && std::isfinite(omega3);
  if (!fits_ok) {
    ok = false;
    if (!rep.witness) rep.witness = Witness{alphas.front(), "(V4)/(V5) envelope fit not positive finite"};
  }
  rep.pass = ok;
  return rep;
}

ConditionReport check_coefficient_symmetries(const CoefficientField& field, int n, double tol,
                                             std::uint64_t seed) {
  require(n >= 1, "check_coefficient_symmetries: n must be >= 1");
  require(std::isfinite(tol) && tol > 0.0, "check_coefficient_symmetries: tol must be positive");

  ConditionReport rep;
  rep.condition = "coefficient-symmetry";
  rep.constants["seed"] = static_cast<double>(seed);

  ProbeRng rng(seed);
  double inf_a = std::numeric_limits<double>::infinity();
  bool ok = true;
  const auto fail = [&](double x, const char* what) {
    ok = false;
    if (!rep.witness) rep.witness = Witness{x, what};
  };

  for (int i = 0; i < n; ++i) {
    const double x = rng.uniform01();
    const double y = rng.uniform01();
    const double a = field.eval_periodic(x, y);
    inf_a = std::min(inf_a, a);
    if (!(a > 0.0)) fail(x, "(A1) positivity failed");
    if (std::abs(field.eval_periodic(-x, y) - a) > tol ||
        std::abs(field.eval_periodic(x, -y) - a) > tol) {
      fail(x, "(A2) evenness failed");
    }
    if (std::abs(field.eval_periodic(x + 1.0, y) - a) > tol ||
        std::abs(field.eval_periodic(x, y + 1.0) - a) > tol) {
      fail(x, "(A3) periodicity failed");
    }
    if (std::abs(field.eval_periodic(y, x) - a) > tol) fail(x, "(A4) exchange symmetry failed");
  }

  rep.constants["infA"] = inf_a;
  rep.pass = ok;
  return rep;
}

}  // namespace curvwell
