#include "curvwell/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace curvwell {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

void require(bool cond, const char* msg) {
  if (!cond) throw std::domain_error(msg);
}
}  // namespace

Grid build_grid(double R, int n) {
  require(std::isfinite(R) && R > 0.0, "build_grid: R must be positive");
  require(n >= 64, "build_grid: resolution must be >= 64");
  Grid g;
  g.kind = GridKind::QuadrantTriangle;
  g.R = R;
  g.n = n;
  g.h = R / (n - 1);
  g.roles.resize(static_cast<std::size_t>(g.node_count()));
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = iy; ix < n; ++ix) {
      BoundaryRole role = BoundaryRole::Interior;
      if (iy == 0) {
        role = BoundaryRole::NodalZero;
      } else if (ix == n - 1) {
        role = BoundaryRole::FarDirichlet;
      } else if (ix == iy) {
        role = BoundaryRole::Mirror;
      }
      g.roles[static_cast<std::size_t>(g.cart_index(ix, iy))] = role;
    }
  }
  return g;
}

Grid build_grid(double R, int n_rho, int n_theta, int j) {
  require(std::isfinite(R) && R > 0.0, "build_grid: R must be positive");
  require(j >= 2, "j must be >= 2");
  require(n_rho >= 64 && n_theta >= 64, "build_grid: resolution must be >= 64");
  Grid g;
  g.kind = GridKind::PolarSector;
  g.R = R;
  g.n_rho = n_rho;
  g.n_theta = n_theta;
  g.j = j;
  g.drho = R / (n_rho - 1);
  g.theta_lo = kPi / 2.0 - kPi / (2.0 * j);
  g.dtheta = (kPi / (2.0 * j)) / (n_theta - 1);
  g.roles.resize(static_cast<std::size_t>(g.node_count()));
  for (int k = 0; k < n_theta; ++k) {
    for (int i = 0; i < n_rho; ++i) {
      BoundaryRole role = BoundaryRole::Interior;
      if (i == 0 || k == n_theta - 1) {
        role = BoundaryRole::NodalZero;
      } else if (i == n_rho - 1) {
        role = BoundaryRole::FarDirichlet;
      } else if (k == 0) {
        role = BoundaryRole::Mirror;
      }
      g.roles[static_cast<std::size_t>(g.polar_index(i, k))] = role;
    }
  }
  return g;
}

}  // namespace curvwell
