#pragma once

#include <memory>
#include <string>
#include <vector>

#include "curvwell/grid.hpp"
#include "curvwell/hetero1d.hpp"
#include "curvwell/model.hpp"
#include "curvwell/nfunc.hpp"

namespace curvwell {

// Node values over the fundamental domain. Constrained nodes carry their
// constraint values (0 on nodal lines, boundary data on the far edge) so the
// field is directly exportable and extendable.
struct Field {
  std::shared_ptr<const Grid> grid;
  std::vector<double> values;
};

// Discrete energy
//   sum_cells w_cell [ Phi_L(|grad_h u|) + A * V_alpha(u) ]
// over the fundamental domain, with cell-anchored forward differences,
// w_cell = h^2 (half on cells the diagonal mirror cuts) for the Cartesian
// kind and |grad u|^2 = u_rho^2 + u_theta^2/rho_c^2, w_cell =
// rho_c drho dtheta for the polar kind. Reads across the diagonal mirror use
// reflected ghost values; far-Dirichlet reads come from the boundary data.
class Problem {
 public:
  Problem(std::shared_ptr<const Grid> grid, NFunctionSpec phi, Potential pot,
          CoefficientField coefficient, std::vector<double> far_data);

  const Grid& grid() const { return *grid_; }
  std::shared_ptr<const Grid> grid_ptr() const { return grid_; }
  const NFunctionSpec& phi() const { return phi_; }
  const Potential& potential() const { return pot_; }
  const CoefficientField& coefficient() const { return coef_; }
  const std::vector<double>& far_data() const { return far_data_; }
  double alpha() const { return pot_.alpha(); }

  double energy(const Field& field) const;

  /// Cellwise energy difference energy(b) - energy(a); resolves decreases far
  /// below the rounding floor of subtracting two independently summed
  /// energies, which is what the descent line search needs near convergence.
  double energy_delta(const Field& a, const Field& b) const;

  /// Exact algebraic gradient of energy() with respect to owned node values;
  /// zero entries at constrained nodes.
  void energy_gradient(const Field& field, std::vector<double>& grad) const;

  double max_cell_grad_sq(const Field& field) const;
  double cell_area_total() const;

  const std::vector<int>& free_nodes() const { return free_nodes_; }

  /// Quadrature weight attached to a node, used to scale gradients into
  /// Euler-Lagrange residual densities.
  double node_weight(int node) const;

  /// Diagonal Hessian estimate per free node (phi taken at its upper bound),
  /// used as the descent preconditioner. The polar stiffness varies by
  /// orders of magnitude in rho, which unpreconditioned descent pays for.
  std::vector<double> diag_precond() const;

 private:
  friend class ExtendedField;
  void prepare_cells();

  std::shared_ptr<const Grid> grid_;
  NFunctionSpec phi_;
  Potential pot_;
  CoefficientField coef_;
  std::vector<double> far_data_;

  // per-cell caches (layout per kind, see saddle2d.cpp)
  std::vector<double> cell_w_;            // quadrature weight
  std::vector<double> cell_wa_;           // weight * A at the cell center
  mutable std::vector<double> cell_gx_;   // scratch: w * phi * du1 / h1
  mutable std::vector<double> cell_gy_;   // scratch: w * phi * du2 / (h2 ...)
  mutable std::vector<double> block_sums_;
  std::vector<int> free_nodes_;
  std::vector<int> free_i1_, free_i2_;  // per-free-node grid coordinates
};

struct Solution {
  std::shared_ptr<const Problem> problem;
  Field field;
  std::vector<IterRecord> history;
  double wall_seconds = 0.0;
  bool converged = false;
  std::vector<std::string> warnings;
};

/// Transition-layer initial guess built from a 1D profile q with matching
/// alpha: q(x) q(y) / alpha on the quadrant, q(distance to the nearest nodal
/// ray) on the sector, clamped to [0, alpha].
Field initial_guess(const std::shared_ptr<const Grid>& grid, double alpha,
                    const Profile1D& hetero_profile);

/// Projected Barzilai-Borwein descent over the free nodes with box
/// constraint [0, alpha]. Exhausting max_iter yields converged = false, not
/// an error; the history is monotone in energy.
Solution minimize(const std::shared_ptr<const Problem>& problem, const Field& init,
                  const SolveConfig& cfg = {});

// End-to-end saddle solve on the quadrant triangle: verifies the coefficient
// symmetries, builds far-field Dirichlet data u(R, y) = q(y) from the 1D
// heteroclinic with the line-averaged coefficient, and minimizes.
Solution solve_saddle(double alpha, double L, const CoefficientField& coefficient, double R, int n,
                      const SolveConfig& cfg = {});

// Pizza solve on the polar sector (constant coefficient b only): far data
// u(R, theta) = q(R (pi/2 - theta)), the arc distance to the nodal ray.
Solution solve_pizza(double alpha, double L, double b, int j, double R, int n_rho, int n_theta,
                     const SolveConfig& cfg = {});

// Deterministic evaluator over the full plane region ([-R, R]^2 for the
// Cartesian kind, the disk of radius R for the polar kind): maps queries
// into the fundamental domain by the symmetry group, applies the
// accumulated sign and interpolates bilinearly. Exactly zero on nodal lines.
class ExtendedField {
 public:
  explicit ExtendedField(const Solution& solution);  // requires convergence

  GridKind kind() const { return grid_->kind; }
  const Grid& grid() const { return *grid_; }

  /// Value at Cartesian (x, y); polar solutions convert internally.
  double eval_xy(double x, double y) const;

  /// Value at polar (rho, theta), any angle; polar kind only.
  double eval_polar(double rho, double theta) const;

 private:
  double fundamental_cart(double x, double y) const;    // 0 <= y <= x <= R
  double fundamental_polar(double rho, double tau) const;  // tau = pi/2 - theta in [0, pi/(2j)]

  std::shared_ptr<const Grid> grid_;
  std::vector<double> values_;
};

ExtendedField extend_full(const Solution& solution);

}  // namespace curvwell
