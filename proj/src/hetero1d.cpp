#include "curvwell/hetero1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "solver_core.hpp"

namespace curvwell {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::domain_error(msg);
}

constexpr double kSqrt2 = 1.4142135623730950488016887242096981;

// Free-node energy problem for the profile: DOFs are q_1..q_{n-2}.
class ProfileProblem {
 public:
  ProfileProblem(const NFunctionSpec& phi, const Potential& pot, std::vector<double> a_nodes,
                 double h, double alpha)
      : phi_(phi), pot_(pot), a_(std::move(a_nodes)), h_(h), alpha_(alpha) {}

  int dofs() const { return static_cast<int>(a_.size()) - 2; }

  double energy(const std::vector<double>& x) const {
    const int n = static_cast<int>(a_.size());
    cell_buf_.resize(static_cast<std::size_t>(n - 1));
    for (int i = 0; i + 1 < n; ++i) {
      cell_buf_[static_cast<std::size_t>(i)] = cell_energy(x, i);
    }
    return pairwise_sum(cell_buf_);
  }

  double energy_delta(const std::vector<double>& x, const std::vector<double>& x_new) const {
    const int n = static_cast<int>(a_.size());
    cell_buf_.resize(static_cast<std::size_t>(n - 1));
    for (int i = 0; i + 1 < n; ++i) {
      cell_buf_[static_cast<std::size_t>(i)] = cell_energy(x_new, i) - cell_energy(x, i);
    }
    return pairwise_sum(cell_buf_);
  }

  void gradient(const std::vector<double>& x, std::vector<double>& g) const {
    const int n = static_cast<int>(a_.size());
    for (int i = 1; i + 1 < n; ++i) {
      const double dl = (value(x, i) - value(x, i - 1)) / h_;
      const double dr = (value(x, i + 1) - value(x, i)) / h_;
      const double flux = phi_.phi_of_sq(dr * dr) * dr - phi_.phi_of_sq(dl * dl) * dl;
      g[i - 1] = -flux + h_ * a_[i] * pot_.eval(value(x, i), 1);
    }
  }

  void project(std::vector<double>& x) const {
    for (double& v : x) v = std::clamp(v, 0.0, alpha_);
  }

  double reduced_grad_inf(const std::vector<double>& x, const std::vector<double>& g) const {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double r = g[i];
      if (x[i] == 0.0) r = std::min(r, 0.0);
      if (x[i] == alpha_) r = std::max(r, 0.0);
      m = std::max(m, std::abs(r));
    }
    return m;
  }

 private:
  double value(const std::vector<double>& x, int i) const {
    const int n = static_cast<int>(a_.size());
    if (i == 0) return 0.0;
    if (i == n - 1) return alpha_;
    return x[i - 1];
  }

  double cell_energy(const std::vector<double>& x, int i) const {
    const double qi = value(x, i);
    const double d = (value(x, i + 1) - qi) / h_;
    return h_ * (phi_.big_phi_of_sq(d * d) + a_[i] * pot_.eval(qi, 0));
  }

  const NFunctionSpec& phi_;
  const Potential& pot_;
  std::vector<double> a_;
  double h_;
  double alpha_;
  mutable std::vector<double> cell_buf_;
};

}  // namespace

double Profile1D::eval(double t) const {
  if (t < 0.0) throw std::domain_error("Profile1D::eval: t must be non-negative");
  if (t >= T) return alpha;
  const double f = t / h();
  const int i = std::min(static_cast<int>(f), n - 2);
  const double w = f - i;
  return (1.0 - w) * values[i] + w * values[i + 1];
}

double Profile1D::derivative(int i) const {
  const double hh = h();
  if (i <= 0) return (values[1] - values[0]) / hh;
  if (i >= n - 1) return (values[n - 1] - values[n - 2]) / hh;
  return (values[i + 1] - values[i - 1]) / (2.0 * hh);
}

Profile1D solve_heteroclinic(double alpha, double L, const Coefficient1D& coeff, double T, int n,
                             const SolveConfig& cfg) {
  require(std::isfinite(alpha) && alpha > 0.0, "solve_heteroclinic: alpha must be positive");
  require(std::isfinite(L) && L > 0.0, "solve_heteroclinic: L must be positive");
  require(n >= 200, "solve_heteroclinic: need n >= 200 nodes");
  require(std::isfinite(T) && kSqrt2 * alpha * T >= 4.0,
          "solve_heteroclinic: T too small to contain the transition");

  const double h = T / (n - 1);
  std::vector<double> a(n);
  for (int i = 0; i < n; ++i) {
    a[i] = coeff(h * i);
    require(std::isfinite(a[i]) && a[i] > 0.0, "solve_heteroclinic: coefficient must be positive");
  }
  const bool unit = std::all_of(a.begin(), a.end(), [](double v) { return v == 1.0; });

  const NFunctionSpec phi = NFunctionSpec::truncated_mean_curvature(L);
  const Potential pot = Potential::quartic(alpha);
  ProfileProblem prob(phi, pot, a, h, alpha);

  std::vector<double> x(prob.dofs());
  for (int i = 1; i + 1 < n; ++i) {
    x[i - 1] = alpha * std::tanh(alpha * kSqrt2 * h * i);
  }

  detail::BbOptions opt;
  opt.tol_grad = cfg.tol_grad;
  opt.max_iter = cfg.max_iter;
  detail::BbResult res = detail::minimize_projected_bb(prob, x, opt);
  if (!res.converged) {
    throw ConvergenceError("solve_heteroclinic: no convergence within max_iter",
                           std::move(res.history));
  }

  Profile1D p;
  p.T = T;
  p.n = n;
  p.alpha = alpha;
  p.L = L;
  p.unit_coefficient = unit;
  p.converged = true;
  p.history = std::move(res.history);
  p.values.resize(n);
  p.values[0] = 0.0;
  p.values[n - 1] = alpha;
  for (int i = 1; i + 1 < n; ++i) p.values[i] = x[i - 1];
  return p;
}

Profile1D solve_heteroclinic(double alpha, double L, double constant_coeff, double T, int n,
                             const SolveConfig& cfg) {
  return solve_heteroclinic(
      alpha, L, [constant_coeff](double) { return constant_coeff; }, T, n, cfg);
}

namespace {

ProfileProblem make_profile_problem(const Profile1D& p, const Coefficient1D& coeff,
                                    const NFunctionSpec& phi, const Potential& pot) {
  std::vector<double> a(static_cast<std::size_t>(p.n));
  for (int i = 0; i < p.n; ++i) a[static_cast<std::size_t>(i)] = coeff(p.node(i));
  return ProfileProblem(phi, pot, std::move(a), p.h(), p.alpha);
}

std::vector<double> interior_values(const Profile1D& p) {
  return std::vector<double>(p.values.begin() + 1, p.values.end() - 1);
}

}  // namespace

double profile_energy(const Profile1D& profile, const Coefficient1D& coeff) {
  const NFunctionSpec phi = NFunctionSpec::truncated_mean_curvature(profile.L);
  const Potential pot = Potential::quartic(profile.alpha);
  return make_profile_problem(profile, coeff, phi, pot).energy(interior_values(profile));
}

std::vector<double> profile_energy_gradient(const Profile1D& profile, const Coefficient1D& coeff) {
  const NFunctionSpec phi = NFunctionSpec::truncated_mean_curvature(profile.L);
  const Potential pot = Potential::quartic(profile.alpha);
  std::vector<double> g(static_cast<std::size_t>(profile.n - 2));
  make_profile_problem(profile, coeff, phi, pot).gradient(interior_values(profile), g);
  return g;
}

double profile_energy_delta(const Profile1D& a, const Profile1D& b, const Coefficient1D& coeff) {
  if (a.n != b.n || a.T != b.T || a.alpha != b.alpha || a.L != b.L) {
    throw std::domain_error("profile_energy_delta: profiles must share a discretization");
  }
  const NFunctionSpec phi = NFunctionSpec::truncated_mean_curvature(a.L);
  const Potential pot = Potential::quartic(a.alpha);
  return make_profile_problem(a, coeff, phi, pot)
      .energy_delta(interior_values(a), interior_values(b));
}

BracketReport check_tanh_bracket(const Profile1D& profile, double tol_lower) {
  require(profile.converged, "check_tanh_bracket: profile not converged");
  require(profile.unit_coefficient,
          "check_tanh_bracket: bracket only applies to the unit coefficient");
  require(std::isfinite(tol_lower) && tol_lower >= 0.0, "check_tanh_bracket: bad tolerance");

  BracketReport rep;
  rep.tol = tol_lower;
  rep.min_slack = std::numeric_limits<double>::infinity();
  rep.kappa = 1.0;
  const double rate = profile.alpha * kSqrt2;
  for (int i = 0; i < profile.n; ++i) {
    const double t = profile.node(i);
    const double q = profile.values[i];
    rep.min_slack = std::min(rep.min_slack, q - profile.alpha * std::tanh(rate * t));
    if (t > 0.0 && q - tol_lower > 0.0) {
      const double arg = std::min((q - tol_lower) / profile.alpha, 1.0 - 1e-16);
      rep.kappa = std::max(rep.kappa, std::atanh(arg) / (rate * t));
    }
  }
  rep.lower_holds = rep.min_slack >= -tol_lower;
  return rep;
}

DecayFit fit_decay(const Profile1D& profile, double window_lo, double window_hi) {
  require(profile.converged, "fit_decay: profile not converged");
  require(0.0 < window_lo && window_lo < window_hi && window_hi < profile.T,
          "fit_decay: window must lie inside (0, T)");

  std::vector<double> ts, log_gap, ts_d, log_dq;
  const double floor_gap = 10.0 * std::numeric_limits<double>::epsilon() * profile.alpha;
  for (int i = 0; i < profile.n; ++i) {
    const double t = profile.node(i);
    if (t < window_lo || t > window_hi) continue;
    const double gap = profile.alpha - profile.values[i];
    if (gap <= floor_gap) throw std::domain_error("fit_decay: degenerate window, alpha - q underflows");
    ts.push_back(t);
    log_gap.push_back(std::log(gap));
    const double dq = profile.derivative(i);
    if (dq > 0.0) {
      ts_d.push_back(t);
      log_dq.push_back(std::log(dq));
    }
  }
  require(ts.size() >= 3 && ts_d.size() >= 3, "fit_decay: window contains too few nodes");

  const auto fit = [](const std::vector<double>& x, const std::vector<double>& y, double& c0,
                      double& c1, double& rms) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sx += x[i];
      sy += y[i];
      sxx += x[i] * x[i];
      sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / det;
    const double icept = (sy * sxx - sx * sxy) / det;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - (icept + slope * x[i]);
      ss += r * r;
    }
    c0 = icept;
    c1 = slope;
    rms = std::sqrt(ss / n);
  };

  DecayFit f;
  f.window_lo = window_lo;
  f.window_hi = window_hi;
  double icept = 0, slope = 0;
  fit(ts, log_gap, icept, slope, f.residual_q);
  f.theta1 = std::exp(icept);
  f.theta2 = -slope;
  fit(ts_d, log_dq, icept, slope, f.residual_dq);
  f.beta1 = std::exp(icept);
  f.beta2 = -slope;

  // Upper tanh constant, fitted the same way as in check_tanh_bracket but
  // without requiring the unit-coefficient precondition (it is only a fit).
  const double rate = profile.alpha * kSqrt2;
  f.kappa = 1.0;
  for (int i = 1; i < profile.n; ++i) {
    const double t = profile.node(i);
    const double q = profile.values[i];
    if (q <= 0.0) continue;
    const double arg = std::min(q / profile.alpha, 1.0 - 1e-16);
    f.kappa = std::max(f.kappa, std::atanh(arg) / (rate * t));
  }
  return f;
}

}  // namespace curvwell
