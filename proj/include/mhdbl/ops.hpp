#pragma once

#include <vector>

#include "mhdbl/field.hpp"

namespace mhdbl {

/// Spectral x-derivatives. Non-finite input is rejected with its location.
Field ddx(const Field& f);
Field d2x(const Field& f);

/// Finite-difference y-derivatives of formal order 2 or 4 (one-sided closures).
Field ddy(const Field& f, int order = 2);
Field d2y(const Field& f, int order = 2);

/// g(x, y) = trapezoidal integral of f from y to the top of the grid.
/// Warns when |f| on the top row exceeds tail_tol.
Field tail_integral(const Field& f, double tail_tol = 1e-8);

/// g(x, y) = trapezoidal integral of f from 0 to y.
Field cumulative_integral(const Field& f);

struct PoissonOptions {
  double compat_tol = 1e-8;
};

/// Solve d2x p + Lp = rhs with dp/dy = wall_flux at y=0 (half-cell closure),
/// p = 0 at the top for nonzero x-modes and a homogeneous Neumann top for the
/// zero mode, whose weighted mean is pinned to zero. L is the conservative
/// three-point operator on the (possibly stretched) y-grid.
/// Throws std::runtime_error carrying the compatibility defect when the zero
/// mode of rhs and wall_flux is not solvable.
Field poisson_neumann(const Field& rhs, const std::vector<double>& wall_flux,
                      const PoissonOptions& opt = {});

/// The discrete operator solved by poisson_neumann applied to p, with the given
/// wall flux, on rows 0..ny-2. The top row returns p itself (boundary row).
Field poisson_operator(const Field& p, const std::vector<double>& wall_flux);

/// Wall flux implied by the half-cell wall row of poisson_neumann.
std::vector<double> discrete_wall_flux(const Field& p, const Field& rhs);

/// Weights of a composite rule exact for cubics on a nonuniform grid
/// (fourth order); the trapezoid weights of Grid::wy are second order.
std::vector<double> quadrature_weights(const std::vector<double>& y);
/// Integral over [0, 2pi) x [0, L] with quadrature_weights in y.
double integrate_xy(const Field& f);

double l2_norm(const Field& f);
double linf_norm(const Field& f);
/// L2 norm with weight (1+y)^l, the layer-space weight on BL grids.
double weighted_l2(const Field& f, double l);

struct Norms {
  double l2 = 0.0;
  double linf = 0.0;
};
Norms norms(const Field& f);

/// ddx(a) + ddy(b, order).
Field divergence(const Field& a, const Field& b, int order = 2);

}  // namespace mhdbl
