#pragma once

// Internal projected Barzilai-Borwein descent with monotone Armijo
// backtracking, shared by the 1D profile solver and the 2D field solver.
//
// The sufficient-decrease test uses P::energy_delta(x, x_trial), a cellwise
// difference of the two energies. Subtracting two independently rounded
// full-energy sums caps the resolvable decrease at the summation noise
// (~n*eps*E), which is far above the true per-step decrease near a tight
// gradient tolerance; the cellwise difference resolves decreases down to
// ~sqrt(n)*eps*max|e_cell| instead. Recorded energies telescope the
// certified decrements from the initial energy, so the stored history is
// monotone by construction and drifts from the freshly summed energy by at
// most that noise.

#include <algorithm>
#include <cmath>
#include <vector>

#include "curvwell/common.hpp"

namespace curvwell::detail {

struct BbOptions {
  double tol_grad = 1e-10;
  int max_iter = 50000;
  double sigma = 1e-4;  // Armijo sufficient-decrease constant
  double step_min = 1e-14;
  double step_max = 1e8;
};

struct BbResult {
  std::vector<IterRecord> history;
  bool converged = false;
};

// P must provide:
//   double energy(const std::vector<double>& x) const;
//   double energy_delta(const std::vector<double>& x,
//                       const std::vector<double>& x_new) const;
//   void gradient(const std::vector<double>& x, std::vector<double>& g) const;
//   void project(std::vector<double>& x) const;
//   double reduced_grad_inf(const std::vector<double>& x,
//                           const std::vector<double>& g) const;
//
// `precond`, when non-empty, holds a positive diagonal Hessian estimate D.
// Steps then follow D^{-1} g, i.e. BB in the D^{1/2} metric: the box keeps
// its product structure under diagonal scaling, <g, x - x_trial> is the
// scaled-space Armijo decrease, and the BB1 step becomes <s, Ds>/<s, y>.
// The minimizer and every recorded quantity are unchanged; only the path
// and iteration count differ.
template <class P>
BbResult minimize_projected_bb(const P& prob, std::vector<double>& x, const BbOptions& opt,
                               const std::vector<double>& precond = {}) {
  BbResult res;
  const std::size_t n = x.size();
  const bool scaled = !precond.empty();

  prob.project(x);
  std::vector<double> g(n), dir(n), x_trial(n), g_new(n);
  prob.gradient(x, g);
  double energy = prob.energy(x);
  double rg = prob.reduced_grad_inf(x, g);
  res.history.push_back({0, energy, rg});
  if (rg <= opt.tol_grad) {
    res.converged = true;
    return res;
  }

  const auto make_dir = [&](const std::vector<double>& grad_vec) {
    if (scaled) {
      for (std::size_t i = 0; i < n; ++i) dir[i] = grad_vec[i] / precond[i];
    } else {
      dir = grad_vec;
    }
  };

  make_dir(g);
  double dinf = 0.0;
  for (double v : dir) dinf = std::max(dinf, std::abs(v));
  double bb_step = 1.0 / std::max(dinf, 1e-12);

  for (int k = 1; k <= opt.max_iter; ++k) {
    double lambda = 1.0;
    double delta = 0.0;
    bool accepted = false;
    while (lambda >= 1e-16) {
      double decrease = 0.0;  // <g, x - x_trial>, >= 0 for projected steps
      for (std::size_t i = 0; i < n; ++i) {
        x_trial[i] = x[i] - lambda * bb_step * dir[i];
      }
      prob.project(x_trial);
      for (std::size_t i = 0; i < n; ++i) {
        decrease += g[i] * (x[i] - x_trial[i]);
      }
      if (decrease <= 0.0) break;  // projection removed the whole step
      delta = prob.energy_delta(x, x_trial);
      if (delta <= -opt.sigma * decrease) {
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) break;  // stationary for the box up to rounding

    prob.gradient(x_trial, g_new);
    double sty = 0.0, sds = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = x_trial[i] - x[i];
      sty += s * (g_new[i] - g[i]);
      sds += scaled ? s * precond[i] * s : s * s;
    }
    bb_step = sty > 0.0 ? std::clamp(sds / sty, opt.step_min, opt.step_max) : opt.step_max;

    x.swap(x_trial);
    g.swap(g_new);
    make_dir(g);
    energy += delta;  // certified decrement; keeps the history monotone
    rg = prob.reduced_grad_inf(x, g);
    res.history.push_back({k, energy, rg});
    if (rg <= opt.tol_grad) {
      res.converged = true;
      return res;
    }
  }
  return res;
}

}  // namespace curvwell::detail
