#include "curvwell/saddle2d.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "solver_core.hpp"

namespace curvwell {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr int kEnergyBlocks = 64;

void require(bool cond, const char* msg) {
  if (!cond) throw std::domain_error(msg);
}

// Cell indexing. Cartesian cells (cx, cy) with 0 <= cy <= cx <= n-2 tile the
// triangle; cells on the diagonal are cut in half by the mirror line and
// carry weight h^2/2, with the node above the diagonal read by reflection.
// Polar cells (i, k) are full cells; the mirror edge is a cell face, so the
// free mirror nodes see the natural boundary condition, which is exactly the
// even reflection.
int cart_cell_index(int m, int cx, int cy) { return cy * m - cy * (cy - 1) / 2 + (cx - cy); }

}  // namespace

Problem::Problem(std::shared_ptr<const Grid> grid, NFunctionSpec phi, Potential pot,
                 CoefficientField coefficient, std::vector<double> far_data)
    : grid_(std::move(grid)),
      phi_(phi),
      pot_(pot),
      coef_(std::move(coefficient)),
      far_data_(std::move(far_data)) {
  require(grid_ != nullptr, "Problem: null grid");
  require(phi_.kind() == NFunctionKind::TruncatedMeanCurvature,
          "Problem: phi must be the truncated mean curvature kind");
  const std::size_t expected =
      grid_->kind == GridKind::QuadrantTriangle ? static_cast<std::size_t>(grid_->n)
                                                : static_cast<std::size_t>(grid_->n_theta);
  require(far_data_.size() == expected, "Problem: far boundary data size mismatch");
  for (double v : far_data_) {
    require(std::isfinite(v) && v >= 0.0 && v <= pot_.alpha(),
            "Problem: boundary data must lie in [0, alpha]");
  }
  prepare_cells();
  const int count = grid_->node_count();
  free_nodes_.reserve(static_cast<std::size_t>(count));
  if (grid_->kind == GridKind::QuadrantTriangle) {
    for (int iy = 0; iy < grid_->n; ++iy) {
      for (int ix = iy; ix < grid_->n; ++ix) {
        const int idx = grid_->cart_index(ix, iy);
        const BoundaryRole r = grid_->roles[static_cast<std::size_t>(idx)];
        if (r == BoundaryRole::Interior || r == BoundaryRole::Mirror) {
          free_nodes_.push_back(idx);
          free_i1_.push_back(ix);
          free_i2_.push_back(iy);
        }
      }
    }
  } else {
    for (int idx = 0; idx < count; ++idx) {
      const BoundaryRole r = grid_->roles[static_cast<std::size_t>(idx)];
      if (r == BoundaryRole::Interior || r == BoundaryRole::Mirror) {
        free_nodes_.push_back(idx);
        free_i1_.push_back(idx % grid_->n_rho);
        free_i2_.push_back(idx / grid_->n_rho);
      }
    }
  }
}

void Problem::prepare_cells() {
  const Grid& g = *grid_;
  double min_a = std::numeric_limits<double>::infinity();
  if (g.kind == GridKind::QuadrantTriangle) {
    const int m = g.n - 1;
    const std::size_t cells = static_cast<std::size_t>(m) * (m + 1) / 2;
    cell_w_.resize(cells);
    cell_wa_.resize(cells);
    cell_gx_.resize(cells);
    cell_gy_.resize(cells);
    for (int cy = 0; cy < m; ++cy) {
      for (int cx = cy; cx < m; ++cx) {
        const std::size_t c = static_cast<std::size_t>(cart_cell_index(m, cx, cy));
        const double w = (cx == cy) ? 0.5 * g.h * g.h : g.h * g.h;
        const double a = coef_.eval((cx + 0.5) * g.h, (cy + 0.5) * g.h);
        min_a = std::min(min_a, a);
        cell_w_[c] = w;
        cell_wa_[c] = w * a;
      }
    }
  } else {
    const int mi = g.n_rho - 1;
    const int mk = g.n_theta - 1;
    const std::size_t cells = static_cast<std::size_t>(mi) * mk;
    cell_w_.resize(cells);
    cell_wa_.resize(cells);
    cell_gx_.resize(cells);
    cell_gy_.resize(cells);
    for (int k = 0; k < mk; ++k) {
      for (int i = 0; i < mi; ++i) {
        const std::size_t c = static_cast<std::size_t>(k) * mi + i;
        const double rho_c = (i + 0.5) * g.drho;
        const double theta_c = g.theta_lo + (k + 0.5) * g.dtheta;
        const double a = coef_.eval(rho_c * std::cos(theta_c), rho_c * std::sin(theta_c));
        min_a = std::min(min_a, a);
        cell_w_[c] = rho_c * g.drho * g.dtheta;
        cell_wa_[c] = cell_w_[c] * a;
      }
    }
  }
  require(min_a > 0.0, "Problem: coefficient must be strictly positive at quadrature points");
  block_sums_.resize(kEnergyBlocks);
}

double Problem::cell_area_total() const { return pairwise_sum(cell_w_); }

double Problem::node_weight(int node) const {
  const Grid& g = *grid_;
  if (g.kind == GridKind::QuadrantTriangle) return g.h * g.h;
  const int i = node % g.n_rho;
  return std::max(i, 1) * g.drho * g.drho * g.dtheta;
}

std::vector<double> Problem::diag_precond() const {
  const Grid& g = *grid_;
  std::vector<double> d(free_nodes_.size());
  if (g.kind == GridKind::QuadrantTriangle) {
    const int m = g.n - 1;
    const double inv_h2 = 1.0 / (g.h * g.h);
    for (std::size_t f = 0; f < free_nodes_.size(); ++f) {
      const int ix = free_i1_[f];
      const int iy = free_i2_[f];
      double acc = cell_w_[static_cast<std::size_t>(cart_cell_index(m, ix, iy))] * 2.0 * inv_h2;
      if (iy < ix) acc += cell_w_[static_cast<std::size_t>(cart_cell_index(m, ix - 1, iy))] * inv_h2;
      acc += cell_w_[static_cast<std::size_t>(cart_cell_index(m, ix, iy - 1))] * inv_h2;
      d[f] = acc;
    }
  } else {
    const int mi = g.n_rho - 1;
    const double inv_dr2 = 1.0 / (g.drho * g.drho);
    const auto ang = [&](int i) {
      const double rc = (i + 0.5) * g.drho;
      return 1.0 / (rc * rc * g.dtheta * g.dtheta);
    };
    for (std::size_t f = 0; f < free_nodes_.size(); ++f) {
      const int i = free_i1_[f];
      const int k = free_i2_[f];
      double acc = cell_w_[static_cast<std::size_t>(k) * mi + i] * (inv_dr2 + ang(i));
      acc += cell_w_[static_cast<std::size_t>(k) * mi + (i - 1)] * inv_dr2;
      if (k >= 1) acc += cell_w_[static_cast<std::size_t>(k - 1) * mi + i] * ang(i);
      d[f] = acc;
    }
  }
  return d;
}

namespace {

// Value readers with constraint substitution. Mirror ghosts (Cartesian only)
// are resolved by exchanging the indices.
struct CartReader {
  const Grid& g;
  const std::vector<double>& far;
  const double* v;
  double operator()(int ix, int iy) const {
    if (iy > ix) std::swap(ix, iy);
    if (iy == 0) return 0.0;
    if (ix == g.n - 1) return far[static_cast<std::size_t>(iy)];
    return v[g.cart_index(ix, iy)];
  }
};

struct PolarReader {
  const Grid& g;
  const std::vector<double>& far;
  const double* v;
  double operator()(int i, int k) const {
    if (k == g.n_theta - 1 || i == 0) return 0.0;
    if (i == g.n_rho - 1) return far[static_cast<std::size_t>(k)];
    return v[k * g.n_rho + i];
  }
};

}  // namespace

double Problem::energy(const Field& field) const {
  const Grid& g = *grid_;
  require(field.values.size() == static_cast<std::size_t>(g.node_count()),
          "energy: field does not conform to the grid");

  const std::size_t cells = cell_w_.size();
  if (g.kind == GridKind::QuadrantTriangle) {
    const int m = g.n - 1;
    const CartReader read{g, far_data_, field.values.data()};
    const double inv_h = 1.0 / g.h;
    for_each_block(kEnergyBlocks, [&](int b) {
      const std::size_t lo = cells * static_cast<std::size_t>(b) / kEnergyBlocks;
      const std::size_t hi = cells * static_cast<std::size_t>(b + 1) / kEnergyBlocks;
      double sum = 0.0;
      // recover (cx, cy) by scanning rows once per block
      for (int cy = 0, row0 = 0; cy < m; row0 += m - cy, ++cy) {
        const int row_len = m - cy;
        const int lo_in = std::max<int>(static_cast<int>(lo) - row0, 0);
        const int hi_in = std::min<int>(static_cast<int>(hi) - row0, row_len);
        for (int r = lo_in; r < hi_in; ++r) {
          const int cx = cy + r;
          const std::size_t c = static_cast<std::size_t>(row0 + r);
          const double ua = read(cx, cy);
          const double ux = (read(cx + 1, cy) - ua) * inv_h;
          const double uy = (read(cx, cy + 1) - ua) * inv_h;
          sum += cell_w_[c] * phi_.big_phi_of_sq(ux * ux + uy * uy) +
                 cell_wa_[c] * pot_.eval(ua, 0);
        }
      }
      block_sums_[static_cast<std::size_t>(b)] = sum;
    });
  } else {
    const int mi = g.n_rho - 1;
    const PolarReader read{g, far_data_, field.values.data()};
    const double inv_dr = 1.0 / g.drho;
    for_each_block(kEnergyBlocks, [&](int b) {
      const std::size_t lo = cells * static_cast<std::size_t>(b) / kEnergyBlocks;
      const std::size_t hi = cells * static_cast<std::size_t>(b + 1) / kEnergyBlocks;
      double sum = 0.0;
      for (std::size_t c = lo; c < hi; ++c) {
        const int i = static_cast<int>(c) % mi;
        const int k = static_cast<int>(c) / mi;
        const double rho_c = (i + 0.5) * g.drho;
        const double ua = read(i, k);
        const double dr = (read(i + 1, k) - ua) * inv_dr;
        const double dt = (read(i, k + 1) - ua) / (g.dtheta * rho_c);
        sum += cell_w_[c] * phi_.big_phi_of_sq(dr * dr + dt * dt) + cell_wa_[c] * pot_.eval(ua, 0);
      }
      block_sums_[static_cast<std::size_t>(b)] = sum;
    });
  }
  const double e = pairwise_sum(block_sums_);
  if (!std::isfinite(e)) throw std::domain_error("energy: non-finite field values");
  return e;
}

double Problem::energy_delta(const Field& a, const Field& b) const {
  const Grid& g = *grid_;
  require(a.values.size() == static_cast<std::size_t>(g.node_count()) &&
              b.values.size() == a.values.size(),
          "energy_delta: fields do not conform to the grid");

  const std::size_t cells = cell_w_.size();
  if (g.kind == GridKind::QuadrantTriangle) {
    const int m = g.n - 1;
    const CartReader ra{g, far_data_, a.values.data()};
    const CartReader rb{g, far_data_, b.values.data()};
    const double inv_h = 1.0 / g.h;
    for_each_block(kEnergyBlocks, [&](int blk) {
      const std::size_t lo = cells * static_cast<std::size_t>(blk) / kEnergyBlocks;
      const std::size_t hi = cells * static_cast<std::size_t>(blk + 1) / kEnergyBlocks;
      double sum = 0.0;
      for (int cy = 0, row0 = 0; cy < m; row0 += m - cy, ++cy) {
        const int row_len = m - cy;
        const int lo_in = std::max<int>(static_cast<int>(lo) - row0, 0);
        const int hi_in = std::min<int>(static_cast<int>(hi) - row0, row_len);
        for (int r = lo_in; r < hi_in; ++r) {
          const int cx = cy + r;
          const std::size_t c = static_cast<std::size_t>(row0 + r);
          const double uaa = ra(cx, cy);
          const double uxa = (ra(cx + 1, cy) - uaa) * inv_h;
          const double uya = (ra(cx, cy + 1) - uaa) * inv_h;
          const double uab = rb(cx, cy);
          const double uxb = (rb(cx + 1, cy) - uab) * inv_h;
          const double uyb = (rb(cx, cy + 1) - uab) * inv_h;
          sum += cell_w_[c] * (phi_.big_phi_of_sq(uxb * uxb + uyb * uyb) -
                               phi_.big_phi_of_sq(uxa * uxa + uya * uya)) +
                 cell_wa_[c] * (pot_.eval(uab, 0) - pot_.eval(uaa, 0));
        }
      }
      block_sums_[static_cast<std::size_t>(blk)] = sum;
    });
  } else {
    const int mi = g.n_rho - 1;
    const PolarReader ra{g, far_data_, a.values.data()};
    const PolarReader rb{g, far_data_, b.values.data()};
    const double inv_dr = 1.0 / g.drho;
    for_each_block(kEnergyBlocks, [&](int blk) {
      const std::size_t lo = cells * static_cast<std::size_t>(blk) / kEnergyBlocks;
      const std::size_t hi = cells * static_cast<std::size_t>(blk + 1) / kEnergyBlocks;
      double sum = 0.0;
      for (std::size_t c = lo; c < hi; ++c) {
        const int i = static_cast<int>(c) % mi;
        const int k = static_cast<int>(c) / mi;
        const double rho_c = (i + 0.5) * g.drho;
        const double inv_rdt = 1.0 / (g.dtheta * rho_c);
        const double uaa = ra(i, k);
        const double dra = (ra(i + 1, k) - uaa) * inv_dr;
        const double dta = (ra(i, k + 1) - uaa) * inv_rdt;
        const double uab = rb(i, k);
        const double drb = (rb(i + 1, k) - uab) * inv_dr;
        const double dtb = (rb(i, k + 1) - uab) * inv_rdt;
        sum += cell_w_[c] * (phi_.big_phi_of_sq(drb * drb + dtb * dtb) -
                             phi_.big_phi_of_sq(dra * dra + dta * dta)) +
               cell_wa_[c] * (pot_.eval(uab, 0) - pot_.eval(uaa, 0));
      }
      block_sums_[static_cast<std::size_t>(blk)] = sum;
    });
  }
  const double e = pairwise_sum(block_sums_);
  if (!std::isfinite(e)) throw std::domain_error("energy_delta: non-finite field values");
  return e;
}

void Problem::energy_gradient(const Field& field, std::vector<double>& grad) const {
  const Grid& g = *grid_;
  require(field.values.size() == static_cast<std::size_t>(g.node_count()),
          "energy_gradient: field does not conform to the grid");
  grad.assign(field.values.size(), 0.0);

  std::vector<double>& gx = cell_gx_;
  std::vector<double>& gy = cell_gy_;
  const std::size_t cells = cell_w_.size();

  if (g.kind == GridKind::QuadrantTriangle) {
    const int m = g.n - 1;
    const CartReader read{g, far_data_, field.values.data()};
    const double inv_h = 1.0 / g.h;

    // pass 1: per-cell flux factors w * phi(|grad u|^2) * du / h
    for_each_block(kEnergyBlocks, [&](int b) {
      const std::size_t lo = cells * static_cast<std::size_t>(b) / kEnergyBlocks;
      const std::size_t hi = cells * static_cast<std::size_t>(b + 1) / kEnergyBlocks;
      for (int cy = 0, row0 = 0; cy < m; row0 += m - cy, ++cy) {
        const int row_len = m - cy;
        const int lo_in = std::max<int>(static_cast<int>(lo) - row0, 0);
        const int hi_in = std::min<int>(static_cast<int>(hi) - row0, row_len);
        for (int r = lo_in; r < hi_in; ++r) {
          const int cx = cy + r;
          const std::size_t c = static_cast<std::size_t>(row0 + r);
          const double ua = read(cx, cy);
          const double ux = (read(cx + 1, cy) - ua) * inv_h;
          const double uy = (read(cx, cy + 1) - ua) * inv_h;
          const double wphi = cell_w_[c] * phi_.phi_of_sq(ux * ux + uy * uy);
          gx[c] = wphi * ux * inv_h;
          gy[c] = wphi * uy * inv_h;
        }
      }
    });

    // pass 2: gather per free node
    const auto& free = free_nodes_;
    for_each_block(kEnergyBlocks, [&](int b) {
      const std::size_t lo = free.size() * static_cast<std::size_t>(b) / kEnergyBlocks;
      const std::size_t hi = free.size() * static_cast<std::size_t>(b + 1) / kEnergyBlocks;
      for (std::size_t f = lo; f < hi; ++f) {
        const int idx = free[f];
        const int ix = free_i1_[f];
        const int iy = free_i2_[f];
        const std::size_t anchor = static_cast<std::size_t>(cart_cell_index(m, ix, iy));
        double acc = -(gx[anchor] + gy[anchor]) +
                     cell_wa_[anchor] * pot_.eval(field.values[static_cast<std::size_t>(idx)], 1);
        if (iy < ix) {
          const std::size_t left = static_cast<std::size_t>(cart_cell_index(m, ix - 1, iy));
          acc += gx[left];
          if (iy == ix - 1) acc += gy[left];  // ghost read of the diagonal cell
        }
        const std::size_t below = static_cast<std::size_t>(cart_cell_index(m, ix, iy - 1));
        acc += gy[below];
        grad[static_cast<std::size_t>(idx)] = acc;
      }
    });
  } else {
    const int mi = g.n_rho - 1;
    const PolarReader read{g, far_data_, field.values.data()};
    const double inv_dr = 1.0 / g.drho;

    for_each_block(kEnergyBlocks, [&](int b) {
      const std::size_t lo = cells * static_cast<std::size_t>(b) / kEnergyBlocks;
      const std::size_t hi = cells * static_cast<std::size_t>(b + 1) / kEnergyBlocks;
      for (std::size_t c = lo; c < hi; ++c) {
        const int i = static_cast<int>(c) % mi;
        const int k = static_cast<int>(c) / mi;
        const double rho_c = (i + 0.5) * g.drho;
        const double inv_rdt = 1.0 / (g.dtheta * rho_c);
        const double ua = read(i, k);
        const double dr = (read(i + 1, k) - ua) * inv_dr;
        const double dt = (read(i, k + 1) - ua) * inv_rdt;
        const double wphi = cell_w_[c] * phi_.phi_of_sq(dr * dr + dt * dt);
        gx[c] = wphi * dr * inv_dr;
        gy[c] = wphi * dt * inv_rdt;
      }
    });

    const auto& free = free_nodes_;
    for_each_block(kEnergyBlocks, [&](int b) {
      const std::size_t lo = free.size() * static_cast<std::size_t>(b) / kEnergyBlocks;
      const std::size_t hi = free.size() * static_cast<std::size_t>(b + 1) / kEnergyBlocks;
      for (std::size_t f = lo; f < hi; ++f) {
        const int idx = free[f];
        const int i = free_i1_[f];
        const int k = free_i2_[f];
        const std::size_t anchor = static_cast<std::size_t>(k) * mi + i;
        double acc = -(gx[anchor] + gy[anchor]) +
                     cell_wa_[anchor] * pot_.eval(field.values[static_cast<std::size_t>(idx)], 1);
        acc += gx[static_cast<std::size_t>(k) * mi + (i - 1)];
        if (k >= 1) acc += gy[static_cast<std::size_t>(k - 1) * mi + i];
        grad[static_cast<std::size_t>(idx)] = acc;
      }
    });
  }
}

double Problem::max_cell_grad_sq(const Field& field) const {
  const Grid& g = *grid_;
  require(field.values.size() == static_cast<std::size_t>(g.node_count()),
          "max_cell_grad_sq: field does not conform to the grid");
  double best = 0.0;
  if (g.kind == GridKind::QuadrantTriangle) {
    const int m = g.n - 1;
    const CartReader read{g, far_data_, field.values.data()};
    const double inv_h = 1.0 / g.h;
    for (int cy = 0; cy < m; ++cy) {
      for (int cx = cy; cx < m; ++cx) {
        const double ua = read(cx, cy);
        const double ux = (read(cx + 1, cy) - ua) * inv_h;
        const double uy = (read(cx, cy + 1) - ua) * inv_h;
        best = std::max(best, ux * ux + uy * uy);
      }
    }
  } else {
    const int mi = g.n_rho - 1;
    const PolarReader read{g, far_data_, field.values.data()};
    const double inv_dr = 1.0 / g.drho;
    for (int k = 0; k < g.n_theta - 1; ++k) {
      for (int i = 0; i < mi; ++i) {
        const double rho_c = (i + 0.5) * g.drho;
        const double ua = read(i, k);
        const double dr = (read(i + 1, k) - ua) * inv_dr;
        const double dt = (read(i, k + 1) - ua) / (g.dtheta * rho_c);
        best = std::max(best, dr * dr + dt * dt);
      }
    }
  }
  return best;
}

Field initial_guess(const std::shared_ptr<const Grid>& grid, double alpha,
                    const Profile1D& hetero_profile) {
  require(grid != nullptr, "initial_guess: null grid");
  require(std::abs(hetero_profile.alpha - alpha) <= 1e-12 * std::max(1.0, alpha),
          "initial_guess: profile alpha does not match");
  Field f;
  f.grid = grid;
  f.values.resize(static_cast<std::size_t>(grid->node_count()));
  const auto clamp = [alpha](double v) { return std::clamp(v, 0.0, alpha); };
  if (grid->kind == GridKind::QuadrantTriangle) {
    for (int iy = 0; iy < grid->n; ++iy) {
      const double qy = hetero_profile.eval(iy * grid->h);
      for (int ix = iy; ix < grid->n; ++ix) {
        const double qx = hetero_profile.eval(ix * grid->h);
        f.values[static_cast<std::size_t>(grid->cart_index(ix, iy))] =
            iy == 0 ? 0.0 : clamp(qx * qy / alpha);
      }
    }
  } else {
    for (int k = 0; k < grid->n_theta; ++k) {
      const double tau = kPi / 2.0 - grid->theta(k);  // distance below the nodal ray
      for (int i = 0; i < grid->n_rho; ++i) {
        const bool nodal = (i == 0 || k == grid->n_theta - 1);
        f.values[static_cast<std::size_t>(grid->polar_index(i, k))] =
            nodal ? 0.0 : clamp(hetero_profile.eval(grid->rho(i) * std::sin(tau)));
      }
    }
  }
  return f;
}

namespace {

// Adapter exposing the free DOFs of a Problem to the BB driver.
class FieldDofProblem {
 public:
  FieldDofProblem(const Problem& p, Field work) : p_(p), work_(std::move(work)), work_b_(work_) {
    full_grad_.resize(work_.values.size());
  }

  double energy(const std::vector<double>& x) const {
    load(work_, x);
    return p_.energy(work_);
  }

  double energy_delta(const std::vector<double>& x, const std::vector<double>& x_new) const {
    load(work_, x);
    load(work_b_, x_new);
    return p_.energy_delta(work_, work_b_);
  }

  void gradient(const std::vector<double>& x, std::vector<double>& g) const {
    load(work_, x);
    p_.energy_gradient(work_, full_grad_);
    const auto& free = p_.free_nodes();
    for (std::size_t f = 0; f < free.size(); ++f) {
      g[f] = full_grad_[static_cast<std::size_t>(free[f])];
    }
  }

  void project(std::vector<double>& x) const {
    const double alpha = p_.alpha();
    for (double& v : x) v = std::clamp(v, 0.0, alpha);
  }

  double reduced_grad_inf(const std::vector<double>& x, const std::vector<double>& g) const {
    const double alpha = p_.alpha();
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double r = g[i];
      if (x[i] == 0.0) r = std::min(r, 0.0);
      if (x[i] == alpha) r = std::max(r, 0.0);
      m = std::max(m, std::abs(r));
    }
    return m;
  }

  const Field& field() const { return work_; }

 private:
  void load(Field& into, const std::vector<double>& x) const {
    const auto& free = p_.free_nodes();
    for (std::size_t f = 0; f < free.size(); ++f) {
      into.values[static_cast<std::size_t>(free[f])] = x[f];
    }
  }

  const Problem& p_;
  mutable Field work_;
  mutable Field work_b_;
  mutable std::vector<double> full_grad_;
};

void bake_constraints(const Problem& p, Field& f) {
  const Grid& g = p.grid();
  if (g.kind == GridKind::QuadrantTriangle) {
    for (int iy = 0; iy < g.n; ++iy) {
      f.values[static_cast<std::size_t>(g.cart_index(g.n - 1, iy))] =
          p.far_data()[static_cast<std::size_t>(iy)];
      f.values[static_cast<std::size_t>(g.cart_index(iy, 0))] = 0.0;
    }
    f.values[static_cast<std::size_t>(g.cart_index(g.n - 1, 0))] = 0.0;
  } else {
    for (int k = 0; k < g.n_theta; ++k) {
      f.values[static_cast<std::size_t>(g.polar_index(g.n_rho - 1, k))] =
          p.far_data()[static_cast<std::size_t>(k)];
      f.values[static_cast<std::size_t>(g.polar_index(0, k))] = 0.0;
    }
    for (int i = 0; i < g.n_rho; ++i) {
      f.values[static_cast<std::size_t>(g.polar_index(i, g.n_theta - 1))] = 0.0;
    }
  }
}

}  // namespace

Solution minimize(const std::shared_ptr<const Problem>& problem, const Field& init,
                  const SolveConfig& cfg) {
  require(problem != nullptr, "minimize: null problem");
  require(init.values.size() == static_cast<std::size_t>(problem->grid().node_count()),
          "minimize: init does not conform to the grid");
  require(cfg.tol_grad > 0.0 && cfg.max_iter >= 1, "minimize: bad solver config");

  const auto t0 = std::chrono::steady_clock::now();

  Field work = init;
  bake_constraints(*problem, work);
  FieldDofProblem dof(*problem, std::move(work));

  const auto& free = problem->free_nodes();
  std::vector<double> x(free.size());
  for (std::size_t f = 0; f < free.size(); ++f) {
    x[f] = init.values[static_cast<std::size_t>(free[f])];
  }

  detail::BbOptions opt;
  opt.tol_grad = cfg.tol_grad;
  opt.max_iter = cfg.max_iter;
  detail::BbResult res = detail::minimize_projected_bb(dof, x, opt, problem->diag_precond());

  Solution sol;
  sol.problem = problem;
  sol.field = dof.field();
  for (std::size_t f = 0; f < free.size(); ++f) {
    sol.field.values[static_cast<std::size_t>(free[f])] = x[f];
  }
  bake_constraints(*problem, sol.field);
  sol.history = std::move(res.history);
  sol.converged = res.converged;
  sol.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return sol;
}

namespace {

// Internal 1D solve for far-field boundary data: long enough that the tanh
// tail is negligible at the far edge, fine enough for smooth interpolation.
Profile1D far_profile(double alpha, double L, const Coefficient1D& a, double needed_extent,
                      const SolveConfig& cfg) {
  const double T = std::max(needed_extent, 6.8 / alpha);
  const int n = std::max(801, static_cast<int>(std::ceil(T / 0.05)) + 1);
  SolveConfig c = cfg;
  c.tol_grad = std::min(cfg.tol_grad, 1e-10);
  return solve_heteroclinic(alpha, L, a, T, n, c);
}

}  // namespace

Solution solve_saddle(double alpha, double L, const CoefficientField& coefficient, double R, int n,
                      const SolveConfig& cfg) {
  require(std::isfinite(alpha) && alpha > 0.0, "solve_saddle: alpha must be positive");
  require(std::isfinite(L) && L > 0.0, "solve_saddle: L must be positive");

  const ConditionReport sym = check_coefficient_symmetries(coefficient, 2000, 1e-9);
  if (!sym.pass) {
    throw std::domain_error("solve_saddle: coefficient fails the (A1)-(A4) symmetry check");
  }

  const Coefficient1D a1d = [&coefficient](double t) { return coefficient.line_average(t); };
  const Profile1D q = far_profile(alpha, L, a1d, R, cfg);

  auto grid = std::make_shared<Grid>(build_grid(R, n));
  std::vector<double> far(static_cast<std::size_t>(n));
  for (int iy = 0; iy < n; ++iy) far[static_cast<std::size_t>(iy)] = q.eval(iy * grid->h);
  far[0] = 0.0;

  auto problem = std::make_shared<Problem>(grid, NFunctionSpec::truncated_mean_curvature(L),
                                           Potential::quartic(alpha), coefficient, std::move(far));
  Solution sol = minimize(problem, initial_guess(grid, alpha, q), cfg);
  if (alpha > 0.2) {
    sol.warnings.push_back("alpha exceeds the 0.2 heuristic validity threshold; verify reports "
                           "rather than assumes the theorem properties");
  }
  return sol;
}

Solution solve_pizza(double alpha, double L, double b, int j, double R, int n_rho, int n_theta,
                     const SolveConfig& cfg) {
  require(std::isfinite(alpha) && alpha > 0.0, "solve_pizza: alpha must be positive");
  require(std::isfinite(L) && L > 0.0, "solve_pizza: L must be positive");
  if (j < 2) throw std::domain_error("j must be >= 2");

  const CoefficientField coefficient = CoefficientField::constant(b);
  const double arc_max = R * kPi / (2.0 * j);
  const Profile1D q = far_profile(alpha, L, [b](double) { return b; }, arc_max, cfg);

  auto grid = std::make_shared<Grid>(build_grid(R, n_rho, n_theta, j));
  std::vector<double> far(static_cast<std::size_t>(n_theta));
  for (int k = 0; k < n_theta; ++k) {
    far[static_cast<std::size_t>(k)] = q.eval(R * (kPi / 2.0 - grid->theta(k)));
  }
  far[static_cast<std::size_t>(n_theta - 1)] = 0.0;

  auto problem = std::make_shared<Problem>(grid, NFunctionSpec::truncated_mean_curvature(L),
                                           Potential::quartic(alpha), coefficient, std::move(far));
  Solution sol = minimize(problem, initial_guess(grid, alpha, q), cfg);
  if (alpha > 0.2) {
    sol.warnings.push_back("alpha exceeds the 0.2 heuristic validity threshold; verify reports "
                           "rather than assumes the theorem properties");
  }
  return sol;
}

ExtendedField::ExtendedField(const Solution& solution) {
  require(solution.converged, "extend_full: solution not converged");
  require(solution.problem != nullptr && solution.field.grid != nullptr, "extend_full: empty solution");
  grid_ = solution.field.grid;
  values_ = solution.field.values;
  // Re-bake the constraints so nodal lines are exactly zero regardless of
  // where the field came from.
  Field tmp;
  tmp.grid = grid_;
  tmp.values = std::move(values_);
  bake_constraints(*solution.problem, tmp);
  values_ = std::move(tmp.values);
}

double ExtendedField::fundamental_cart(double x, double y) const {
  const Grid& g = *grid_;
  const double fx = x / g.h;
  const double fy = y / g.h;
  const int ix = std::clamp(static_cast<int>(fx), 0, g.n - 2);
  const int iy = std::clamp(static_cast<int>(fy), 0, g.n - 2);
  const double tx = fx - ix;
  const double ty = fy - iy;
  const auto at = [&](int a, int b) {
    if (b > a) std::swap(a, b);
    return values_[static_cast<std::size_t>(g.cart_index(a, b))];
  };
  return (1 - tx) * (1 - ty) * at(ix, iy) + tx * (1 - ty) * at(ix + 1, iy) +
         (1 - tx) * ty * at(ix, iy + 1) + tx * ty * at(ix + 1, iy + 1);
}

double ExtendedField::fundamental_polar(double rho, double tau) const {
  const Grid& g = *grid_;
  const double fi = rho / g.drho;
  const int i = std::clamp(static_cast<int>(fi), 0, g.n_rho - 2);
  const double ti = fi - i;
  const double fk = (g.n_theta - 1) - tau / g.dtheta;
  const int k = std::clamp(static_cast<int>(std::floor(fk)), 0, g.n_theta - 2);
  const double tk = fk - k;
  const auto at = [&](int a, int b) {
    return values_[static_cast<std::size_t>(g.polar_index(a, b))];
  };
  return (1 - ti) * (1 - tk) * at(i, k) + ti * (1 - tk) * at(i + 1, k) +
         (1 - ti) * tk * at(i, k + 1) + ti * tk * at(i + 1, k + 1);
}

double ExtendedField::eval_xy(double x, double y) const {
  if (grid_->kind == GridKind::PolarSector) {
    return eval_polar(std::hypot(x, y), std::atan2(y, x));
  }
  const double R = grid_->R;
  const double slack = 1e-12 * R;
  if (std::abs(x) > R + slack || std::abs(y) > R + slack) {
    throw std::domain_error("extend: query outside [-R, R]^2");
  }
  if (x == 0.0 || y == 0.0) return 0.0;
  const double sign = ((x < 0.0) != (y < 0.0)) ? -1.0 : 1.0;
  double ax = std::min(std::abs(x), R);
  double ay = std::min(std::abs(y), R);
  if (ay > ax) std::swap(ax, ay);
  return sign * fundamental_cart(ax, ay);
}

double ExtendedField::eval_polar(double rho, double theta) const {
  require(grid_->kind == GridKind::PolarSector, "eval_polar: Cartesian solution");
  const double R = grid_->R;
  if (!(rho >= 0.0) || rho > R * (1.0 + 1e-12)) {
    throw std::domain_error("extend: query outside the disk of radius R");
  }
  rho = std::min(rho, R);
  if (rho == 0.0) return 0.0;

  // tau = pi/2 - theta: the field is odd about tau = 0, flips sign under
  // tau -> tau + pi/j and is even about tau = pi/(2j).
  const double P = kPi / grid_->j;
  double tau = kPi / 2.0 - theta;
  const double kf = std::floor(tau / P);
  double r = tau - kf * P;
  double sign = (static_cast<long long>(kf) % 2 == 0) ? 1.0 : -1.0;
  if (r > 0.5 * P) r = P - r;
  if (r <= 0.0) return 0.0;
  r = std::min(r, 0.5 * P);
  return sign * fundamental_polar(rho, r);
}

ExtendedField extend_full(const Solution& solution) { return ExtendedField(solution); }

}  // namespace curvwell
