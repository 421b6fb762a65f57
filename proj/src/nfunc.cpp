#include "curvwell/nfunc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace curvwell {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::domain_error(msg);
}

std::string format_param(const char* name, double v) {
  std::ostringstream os;
  os.precision(17);
  os << name << v;
  return os.str();
}

// Least squares slope/intercept of y against x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  LineFit f;
  f.slope = (n * sxy - sx * sy) / det;
  f.intercept = (sy * sxx - sx * sxy) / det;
  return f;
}

}  // namespace

TruncationConstants truncation_constants(double L) {
  require(std::isfinite(L) && L > 0.0, "truncation level L must be positive and finite");
  TruncationConstants c;
  c.x_L = std::sqrt(1.0 + L) / (4.0 * (1.0 + L) * (1.0 + L));
  c.y_L = (4.0 * L + 3.0) * c.x_L;
  return c;
}

NFunctionSpec NFunctionSpec::truncated_mean_curvature(double L) {
  const TruncationConstants c = truncation_constants(L);
  NFunctionSpec s;
  s.kind_ = NFunctionKind::TruncatedMeanCurvature;
  s.L_ = L;
  s.x_L_ = c.x_L;
  s.y_L_ = c.y_L;
  // Phi at the start of the flat branch (t^2 = L+1): closed-form value of
  // sqrt(1+L) - 1 + (1/2) * (x_L/3 + y_L), with the root term kept
  // cancellation-free.
  s.big_phi_knee_ = L / (std::sqrt(1.0 + L) + 1.0) + 0.5 * (c.x_L / 3.0 + c.y_L);
  return s;
}

NFunctionSpec NFunctionSpec::power_law(double p) {
  require(std::isfinite(p) && p > 1.0 && p <= 2.0, "power-law exponent p must lie in (1, 2]");
  NFunctionSpec s;
  s.kind_ = NFunctionKind::PowerLaw;
  s.p_ = p;
  return s;
}

double NFunctionSpec::level() const {
  require(kind_ == NFunctionKind::TruncatedMeanCurvature, "level() requires the truncated kind");
  return L_;
}

double NFunctionSpec::exponent() const {
  require(kind_ == NFunctionKind::PowerLaw, "exponent() requires the power-law kind");
  return p_;
}

double NFunctionSpec::x_L() const {
  require(kind_ == NFunctionKind::TruncatedMeanCurvature, "x_L() requires the truncated kind");
  return x_L_;
}

double NFunctionSpec::y_L() const {
  require(kind_ == NFunctionKind::TruncatedMeanCurvature, "y_L() requires the truncated kind");
  return y_L_;
}

double NFunctionSpec::phi_of_sq(double s) const {
  if (kind_ == NFunctionKind::TruncatedMeanCurvature) {
    if (s <= L_) return 1.0 / std::sqrt(1.0 + s);
    if (s <= L_ + 1.0) {
      const double d = s - L_ - 1.0;
      return x_L_ * d * d + y_L_;
    }
    return y_L_;
  }
  if (s == 0.0) {
    if (p_ == 2.0) return 1.0;
    throw SingularityError("power-law phi is singular at t = 0");
  }
  return std::pow(s, 0.5 * (p_ - 2.0));
}

double NFunctionSpec::phi(double t) const {
  require(std::isfinite(t), "phi: non-finite argument");
  require(t >= 0.0, "phi: argument must be non-negative");
  return phi_of_sq(t * t);
}

double NFunctionSpec::big_phi_of_sq(double s) const {
  if (kind_ == NFunctionKind::TruncatedMeanCurvature) {
    // sqrt(1+s) - 1 written cancellation-free: the descent line search
    // resolves per-cell energy differences near the rounding floor, and the
    // naive form quantizes small Phi values at ulp(1).
    if (s <= L_) return s / (std::sqrt(1.0 + s) + 1.0);
    if (s <= L_ + 1.0) {
      const double d = s - L_ - 1.0;
      return L_ / (std::sqrt(1.0 + L_) + 1.0) +
             0.5 * (x_L_ * (d * d * d + 1.0) / 3.0 + y_L_ * (s - L_));
    }
    return big_phi_knee_ + 0.5 * y_L_ * (s - L_ - 1.0);
  }
  return std::pow(s, 0.5 * p_) / p_;
}

double NFunctionSpec::big_phi(double t) const {
  require(std::isfinite(t), "big_phi: non-finite argument");
  return big_phi_of_sq(t * t);
}

std::string NFunctionSpec::describe() const {
  if (kind_ == NFunctionKind::TruncatedMeanCurvature) return format_param("truncated:L=", L_);
  return format_param("power:p=", p_);
}

void ZetaParams::validate() const {
  require(std::isfinite(delta_alpha) && delta_alpha > 0.0, "zeta: delta_alpha must be positive");
  require(std::isfinite(a) && a > 0.0, "zeta: rate a must be positive");
  require(std::isfinite(j) && std::isfinite(L) && L > 0.0, "zeta: non-finite parameters");
  require(j - 0.25 - L > 0.0, "zeta: j - 1/4 - L must be positive");
}

ZetaValue zeta(const ZetaParams& params, double t) {
  params.validate();
  const double c = params.center();
  const double den = std::cosh(params.a * (params.j - 0.25 - params.L) / 2.0);
  ZetaValue z;
  z.value = params.delta_alpha * std::cosh(params.a * (t - c)) / den;
  z.derivative = params.delta_alpha * params.a * std::sinh(params.a * (t - c)) / den;
  return z;
}

ConditionReport check_phi_conditions(const NFunctionSpec& spec,
                                     std::span<const double> sample_grid) {
  require(!sample_grid.empty(), "check_phi_conditions: empty sample grid");
  for (std::size_t i = 0; i < sample_grid.size(); ++i) {
    require(std::isfinite(sample_grid[i]) && sample_grid[i] > 0.0,
            "check_phi_conditions: grid samples must be positive");
    require(i == 0 || sample_grid[i] > sample_grid[i - 1],
            "check_phi_conditions: grid must be strictly increasing");
  }

  ConditionReport rep;
  rep.condition = "phi-conditions";

  const auto st = [&](double t) { return spec.phi(t) * t; };

  double ratio_min = std::numeric_limits<double>::infinity();
  double ratio_max = -std::numeric_limits<double>::infinity();
  bool ok = true;
  for (double t : sample_grid) {
    const double p = spec.phi(t);
    const double h = 1e-5 * std::max(1.0, t);
    const double ds =
        (-st(t + 2 * h) + 8 * st(t + h) - 8 * st(t - h) + st(t - 2 * h)) / (12.0 * h);
    const double ratio = ds / p;
    if (!(p > 0.0) || !(ds > 0.0) || !std::isfinite(ratio)) {
      ok = false;
      if (!rep.witness) rep.witness = Witness{t, "(phi1)/(phi2) failed: phi or (phi t)' not positive finite"};
      continue;
    }
    ratio_min = std::min(ratio_min, ratio);
    ratio_max = std::max(ratio_max, ratio);
  }
  if (std::isfinite(ratio_min)) {
    rep.constants["l"] = ratio_min + 1.0;
    rep.constants["m"] = ratio_max + 1.0;
  }

  // (phi3) on the low end of the grid: fit phi(t) t ~ c t^{s-1} over the
  // lowest quartile (at least 4 samples) and record the envelope constants.
  const std::size_t nfit = std::max<std::size_t>(4, sample_grid.size() / 4);
  const std::size_t nlow = std::min(nfit, sample_grid.size());
  std::vector<double> lg_t(nlow), lg_s(nlow), lg_phi(nlow);
  for (std::size_t i = 0; i < nlow; ++i) {
    const double t = sample_grid[i];
    lg_t[i] = std::log(t);
    lg_s[i] = std::log(st(t));
    lg_phi[i] = std::log(spec.phi(t));
  }
  const LineFit fit = fit_line(lg_t, lg_s);
  const double s_exp = fit.slope + 1.0;
  const double eta = sample_grid[nlow - 1];
  double c1 = std::numeric_limits<double>::infinity();
  double c2 = 0.0;
  for (std::size_t i = 0; i < nlow; ++i) {
    const double t = sample_grid[i];
    const double env = st(t) / std::pow(t, s_exp - 1.0);
    c1 = std::min(c1, env);
    c2 = std::max(c2, env);
  }
  rep.constants["s"] = s_exp;
  rep.constants["eta"] = eta;
  rep.constants["c1"] = c1;
  rep.constants["c2"] = c2;
  if (!(s_exp > 1.0 && c1 > 0.0 && std::isfinite(c2))) {
    ok = false;
    if (!rep.witness) rep.witness = Witness{sample_grid[0], "(phi3) fit failed: need s > 1 with positive finite envelope"};
  }

  // Class membership: phi must extend continuously to t = 0. A negative
  // log-log slope of phi near zero means phi(0+) blows up, which rules the
  // generator out of C^1([0,inf)) even when (phi1)-(phi3) hold on (0,inf).
  const double slope0 = fit_line(lg_t, lg_phi).slope;
  if (!(slope0 >= -0.05)) {
    ok = false;
    if (!rep.witness)
      rep.witness = Witness{sample_grid[0], "phi unbounded at 0+: not C^1([0,inf))"};
  }

  rep.pass = ok;
  return rep;
}

ConditionReport check_tilde_phi4(const NFunctionSpec& spec, const ZetaParams& params,
                                 double kappa2, std::span<const double> sample_grid) {
  params.validate();
  require(std::isfinite(kappa2) && kappa2 > 0.0, "check_tilde_phi4: kappa2 must be positive");
  require(sample_grid.size() >= 2, "check_tilde_phi4: grid too small");
  const double c = params.center();
  require(sample_grid.front() < c && c < sample_grid.back(),
          "check_tilde_phi4: grid must straddle the critical point of zeta");

  ConditionReport rep;
  rep.condition = "tilde-phi4";

  // Certified comparison constant: the truncated generator is pinched
  // between y_L and 1, so phi(|zeta'|) <= 1 <= (1/y_L) phi(kappa2 zeta).
  // The power-law kind has no certificate; divergence past kDivergenceCap
  // (or a singular sample) is the failing verdict.
  constexpr double kDivergenceCap = 1e6;
  const bool certified = spec.kind() == NFunctionKind::TruncatedMeanCurvature;
  const double kappa1 = certified ? 1.0 / spec.y_L() : kDivergenceCap;

  double sup_ratio = 0.0;
  double arg_max = sample_grid.front();
  bool singular = false;
  for (double t : sample_grid) {
    const ZetaValue z = zeta(params, t);
    double ratio;
    try {
      ratio = spec.phi(std::abs(z.derivative)) / spec.phi(kappa2 * z.value);
    } catch (const SingularityError&) {
      singular = true;
      rep.witness = Witness{t, "phi(|zeta'|) singular: zeta' vanishes at the critical point"};
      continue;
    }
    if (!std::isfinite(ratio)) {
      singular = true;
      rep.witness = Witness{t, "non-finite ratio phi(|zeta'|)/phi(kappa2 zeta)"};
      continue;
    }
    if (ratio > sup_ratio) {
      sup_ratio = ratio;
      arg_max = t;
    }
  }

  rep.constants["kappa1"] = kappa1;
  rep.constants["kappa2"] = kappa2;
  rep.constants["supRatio"] = sup_ratio;
  rep.pass = !singular && sup_ratio <= kappa1 * (1.0 + 1e-12);
  if (!rep.pass && !rep.witness) {
    rep.witness = Witness{arg_max, "ratio exceeds the comparison constant"};
  }
  return rep;
}

}  // namespace curvwell
