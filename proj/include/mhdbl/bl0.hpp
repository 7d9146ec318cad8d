#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mhdbl/field.hpp"
#include "mhdbl/linalg.hpp"
#include "mhdbl/trajectory.hpp"

namespace mhdbl {

/// Thrown when h^p drops below the positivity gate.
class PositivityViolation : public std::runtime_error {
 public:
  PositivityViolation(const std::string& msg, double t, double x, double eta, double h)
      : std::runtime_error(msg), t(t), x(x), eta(eta), h(h) {}
  double t, x, eta, h;
};

struct BLOptions {
  double mu = 1.0, kappa = 1.0;
  double delta0 = 0.5;  // gate at delta0/2
  int order = 4;        // order of the eta-operators used for Neumann rows and jets
  int corner_steps = 5, corner_substeps = 10;
  double cfl_max = 1.0;
};

/// Prandtl-type layer solution at the trace times: up, vp, hp, gp.
struct BLSolution0 {
  Trajectory traj;
  std::vector<double> min_h;  // per snapshot
  double dt = 0.0;
  double max_courant = 0.0;
};

/// Solve the nonlinear layer system for (u^p, h^p) on a BL grid, driven by the
/// zeroth-order wall traces (channels u, h, dx_p). Initial data are the wall
/// traces at t=0, constant in eta, with u^p = 0 on the wall row. Far field is
/// Dirichlet (ubar, hbar) at L_eta; the wall has u^p = 0 and d_eta h^p = 0.
/// Throws PositivityViolation when min h^p < delta0/2.
BLSolution0 solve_bl0(const TraceSeries& trace0, const GridPtr& blgrid, double dt, const BLOptions& opt = {});

/// Decayed profiles ub0, vb0, hb0, gb0 with v_b, g_b as tail integrals of
/// d_x u_b, d_x h_b, plus their wall values (channels vb0, gb0).
struct BLProfile0 {
  Trajectory traj;
  TraceSeries wall;
};
BLProfile0 derive_profile0(const BLSolution0& sol, const TraceSeries& trace0);

/// Max residuals of the decayed-profile equations (u, h) and of the g_b
/// equation, each relative to the largest term, over interior snapshots with
/// t >= t_min (the layer is unresolved at the first few snapshots).
struct Profile0Residual {
  double u = 0.0, h = 0.0, g = 0.0;
  double scale = 0.0;
};
Profile0Residual check_profile0_consistency(const BLProfile0& prof, const TraceSeries& trace0,
                                            const BLOptions& opt = {}, double t_min = 0.1);

namespace detail {

/// Second-order upwind derivative of z with signed speed c along eta at row j
/// of a uniform grid with spacing d (first order next to either end).
double upwind_eta(const double* z, int stride, int j, int N, double c, double d);

/// IMEX ARS(2,2,2) coefficients.
struct ARS222 {
  double gamma, delta;
  ARS222();
};

enum class BC { Dirichlet, Neumann };

/// Column solver for (I - c L) f = rhs on interior rows, L the three-point
/// second derivative. Boundary rows impose a value (Dirichlet) or the first
/// eta-derivative through the given-order one-sided row (Neumann). One LU
/// serves every x-column.
class ColumnImplicit {
 public:
  ColumnImplicit(const GridPtr& g, double c, BC wall, BC top, int order);
  /// f holds the rhs on entry (boundary rows ignored) and the solution on exit.
  void solve(Field& f, const std::vector<double>& wall, const std::vector<double>& top) const;

 private:
  GridPtr g_;
  BandMatrix m_;
};

/// L f on interior rows (zero on boundary rows).
Field second_diff(const Field& f);

}  // namespace detail

}  // namespace mhdbl
