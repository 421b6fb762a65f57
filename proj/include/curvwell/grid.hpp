#pragma once

#include <cstdint>
#include <vector>

#include "curvwell/common.hpp"

namespace curvwell {

enum class GridKind { QuadrantTriangle, PolarSector };

enum class BoundaryRole : std::uint8_t { Interior, NodalZero, Mirror, FarDirichlet };

// Symmetry-reduced fundamental domain.
//
// quadrant-triangle: nodes (ix, iy) with 0 <= iy <= ix <= n-1 covering
//   {0 <= y <= x <= R}; nodal-zero on y = 0, mirror on y = x, far-Dirichlet
//   on x = R. Ordered row-major by increasing y then x.
// polar-sector: nodes (i, k) covering {0 <= rho <= R} x
//   {pi/2 - pi/(2j) <= theta <= pi/2}; nodal-zero on theta = pi/2 and at
//   rho = 0, mirror on theta = pi/2 - pi/(2j), far-Dirichlet on rho = R.
//   Ordered by increasing theta then rho.
struct Grid {
  GridKind kind = GridKind::QuadrantTriangle;
  double R = 0.0;

  int n = 0;      // Cartesian nodes per side
  double h = 0.0;

  int n_rho = 0, n_theta = 0, j = 0;
  double drho = 0.0, dtheta = 0.0;
  double theta_lo = 0.0;  // pi/2 - pi/(2j)

  std::vector<BoundaryRole> roles;  // per owned node, in canonical order

  int node_count() const {
    return kind == GridKind::QuadrantTriangle ? n * (n + 1) / 2 : n_rho * n_theta;
  }

  // Canonical node index for 0 <= iy <= ix <= n-1.
  int cart_index(int ix, int iy) const { return iy * n - iy * (iy - 1) / 2 + (ix - iy); }

  int polar_index(int i, int k) const { return k * n_rho + i; }

  double rho(int i) const { return drho * i; }
  double theta(int k) const { return theta_lo + dtheta * k; }
};

/// Quadrant-triangle grid with n >= 64 nodes per side.
Grid build_grid(double R, int n);

/// Polar-sector grid; j >= 2 and both resolutions >= 64.
Grid build_grid(double R, int n_rho, int n_theta, int j);

}  // namespace curvwell
