#pragma once

#include <span>
#include <vector>

#include "curvwell/nfunc.hpp"

namespace curvwell {

// Symmetric double-well potential with wells at +-alpha. The quartic form is
// V(t) = (t^2 - alpha^2)^2; the tabulated form interpolates columns
// (t, V, V', V'') linearly and raises a domain error outside its range.
class Potential {
 public:
  enum class Form { Quartic, Tabulated };

  static Potential quartic(double alpha);
  static Potential tabulated(double alpha, std::vector<double> t, std::vector<double> v,
                             std::vector<double> v1, std::vector<double> v2);

  double alpha() const noexcept { return alpha_; }
  Form form() const noexcept { return form_; }

  /// V (order 0), V' (order 1) or V'' (order 2) at t.
  double eval(double t, int order = 0) const;

 private:
  Potential() = default;
  Form form_ = Form::Quartic;
  double alpha_ = 0.0;
  std::vector<double> tab_t_, tab_v_, tab_v1_, tab_v2_;
};

enum class CoefficientKind { Constant, PeriodicModel, Tabulated };

// Weight A(x, y) in front of V'. The periodic model is
// A(x, y) = cos(2 pi x) cos(2 pi y) + c with c > 1; tabulated fields are
// bilinear on a rectangular lattice and treated as one period of a periodic
// field by the symmetry checker.
class CoefficientField {
 public:
  static CoefficientField constant(double b);
  static CoefficientField periodic_model(double c);
  static CoefficientField tabulated(std::vector<double> xs, std::vector<double> ys,
                                    std::vector<double> values /* row-major by y */);

  CoefficientKind kind() const noexcept { return kind_; }
  double constant_value() const;  // b, constant kind only
  double model_offset() const;    // c, periodic-model kind only

  double eval(double x, double y) const;

  /// Average of A(t, .) over one period in the second argument; used to
  /// build the 1D coefficient for far-field boundary data.
  double line_average(double t) const;

  /// Evaluation with both arguments wrapped into the fundamental period,
  /// which is how the symmetry checker probes identities like A(-x, y).
  double eval_periodic(double x, double y) const;

  // Tabulated-kind internals, needed to persist a problem description.
  const std::vector<double>& table_xs() const;
  const std::vector<double>& table_ys() const;
  const std::vector<double>& table_values() const;

 private:
  CoefficientField() = default;
  CoefficientKind kind_ = CoefficientKind::Constant;
  double b_ = 0.0;
  double c_ = 0.0;
  std::vector<double> xs_, ys_, vals_;
  double period_x_ = 1.0, period_y_ = 1.0;
};

/// V, V' or V'' of `pot` at t; thin free-function spelling of Potential::eval.
double potential_eval(const Potential& pot, double t, int order);

// Family-level verification for the quartic wells:
//  - (V3): max_{|t|<=alpha} |V'_alpha| <= C(lambda) = (8/(3 sqrt 3)) lambda^3
//    uniformly over the supplied alphas in (0, lambda);
//  - (V4): envelope constants w1, w2 of V(t) / Phi_L(|t-alpha|) fitted on
//    |t - alpha| <= alpha/4;
//  - (V5): envelope constants omega1, omega3 of
//    V'(t) / (-phi_L(|alpha-t|)(alpha-t) t) on (0, alpha + alpha/4], with
//    omega2 = omega4 = 1 (any positive pair works for the pinched phi_L).
// Fitted values are reported, never asserted against fixed truth.
ConditionReport check_potential_family(std::span<const double> alphas, double lambda,
                                       const NFunctionSpec& phi_spec);

/// A(x, y) for `field`; thin free-function spelling of CoefficientField::eval.
double coefficient_eval(const CoefficientField& field, double x, double y);

// Samples n seeded random points and verifies positivity (A1), evenness in
// each argument (A2), 1-periodicity in each argument (A3) and exchange
// symmetry (A4), each to within tol.
ConditionReport check_coefficient_symmetries(const CoefficientField& field, int n, double tol,
                                             std::uint64_t seed = kDefaultProbeSeed);

}  // namespace curvwell
