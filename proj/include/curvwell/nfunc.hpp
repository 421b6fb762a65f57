#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>

#include "curvwell/common.hpp"

namespace curvwell {

/// Fit constants of the truncated mean curvature generator at level L:
/// x_L = (1+L)^{-3/2}/4 and y_L = (4L+3) x_L. They make the quadratic cap
/// match 1/sqrt(1+t) with C^1 contact at t = L and t = L+1.
struct TruncationConstants {
  double x_L = 0.0;
  double y_L = 0.0;
};

TruncationConstants truncation_constants(double L);

enum class NFunctionKind { TruncatedMeanCurvature, PowerLaw };

// Generator phi of an N-function Phi(t) = \int_0^{|t|} phi(s) s ds.
//
// Two kinds are supported:
//  - truncated mean curvature at level L: phi(t) = phihat(t^2) with
//      phihat(u) = 1/sqrt(1+u)          on [0, L]
//                  x_L (u-L-1)^2 + y_L  on [L, L+1]
//                  y_L                  on [L+1, inf)
//    so the generated operator is uniformly elliptic while agreeing with the
//    mean curvature operator wherever |grad u|^2 <= L.
//  - power law: phi(t) = t^{p-2} with p in (1, 2], singular at t = 0 for
//    p < 2. Used as the negative test case of the growth-comparison check.
class NFunctionSpec {
 public:
  static NFunctionSpec truncated_mean_curvature(double L);
  static NFunctionSpec power_law(double p);

  NFunctionKind kind() const noexcept { return kind_; }
  double level() const;     // L, truncated kind only
  double exponent() const;  // p, power-law kind only
  double x_L() const;
  double y_L() const;

  double phi(double t) const;
  double big_phi(double t) const;

  // t^2-based forms; Phi is even, so solvers can work with |grad u|^2 and
  // never take the square root. The first branch of phi_of_sq is exactly
  // 1.0 / std::sqrt(1.0 + s), which the truncation-consistency check relies
  // on being bit-identical with the untruncated coefficient.
  double phi_of_sq(double s) const;
  double big_phi_of_sq(double s) const;

  /// "truncated:L=<L>" or "power:p=<p>", the CLI spelling.
  std::string describe() const;

 private:
  NFunctionSpec() = default;
  NFunctionKind kind_ = NFunctionKind::TruncatedMeanCurvature;
  double L_ = 0.0;
  double p_ = 0.0;
  double x_L_ = 0.0;
  double y_L_ = 0.0;
  double big_phi_knee_ = 0.0;  // Phi at t^2 = L+1, start of the flat branch
};

// Parameters of the cosh comparison function
//   zeta(t) = delta_alpha * cosh(a (t - c)) / cosh(a (j - 1/4 - L)/2),
//   c = (j - 1/4 + L)/2,
// used by the growth-comparison condition check.
struct ZetaParams {
  double delta_alpha = 0.0;
  double a = 0.0;
  double j = 0.0;
  double L = 0.0;

  double center() const noexcept { return (j - 0.25 + L) / 2.0; }
  void validate() const;  // delta_alpha, a > 0 and j - 1/4 - L > 0
};

struct ZetaValue {
  double value = 0.0;
  double derivative = 0.0;
};

ZetaValue zeta(const ZetaParams& params, double t);

struct Witness {
  double point = 0.0;
  std::string detail;
};

// Outcome of a numeric condition check. `constants` carries the estimated
// quantities (l, m, c1, c2, s, eta, kappa1, kappa2, supRatio, ... as
// applicable); a failing report always carries a witness sample.
struct ConditionReport {
  std::string condition;
  bool pass = false;
  std::map<std::string, double> constants;
  std::optional<Witness> witness;
};

// Verifies on the sample grid (strictly increasing, positive):
//   (phi1)  phi(t) > 0 and (phi(t) t)' > 0,
//   (phi2)  bounded ratio (phi(t) t)'/phi(t), reported as [l-1, m-1],
//   (phi3)  c1 t^{s-1} <= phi(t) t <= c2 t^{s-1} near zero with fitted s,
// plus boundedness of phi at 0+ (membership in C^1([0,inf)), the standing
// class requirement), which the power-law kind with p < 2 fails.
// Derivatives use 5-point central differences with h = 1e-5 * max(1, t).
ConditionReport check_phi_conditions(const NFunctionSpec& spec,
                                     std::span<const double> sample_grid);

// Growth comparison along zeta: computes
//   supRatio = max over grid of phi(|zeta'(t)|) / phi(kappa2 * zeta(t)).
// For the truncated kind the certificate kappa1 = 1/y_L applies (y_L <= phi
// <= 1) and the report must stay below it. A singular evaluation (power-law
// at zeta' = 0) is recorded as a failing verdict with a witness, not thrown.
// The grid must straddle the critical point t = center().
ConditionReport check_tilde_phi4(const NFunctionSpec& spec,
                                 const ZetaParams& params, double kappa2,
                                 std::span<const double> sample_grid);

}  // namespace curvwell
