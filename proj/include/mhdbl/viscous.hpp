#pragma once

#include <vector>

#include "mhdbl/field.hpp"
#include "mhdbl/trajectory.hpp"

namespace mhdbl {

/// Viscous MHD with viscosity mu*eps and resistivity kappa*eps.
struct ViscousParams {
  double eps = 1e-2, mu = 1.0, kappa = 1.0;
  double T = 0.5, dt = 1e-3;
  double dt_snap = 0.01;
  int order = 4;
  double cfl_max = 1.0;
  double gate = 0.25;  // first wall spacing must be <= gate * sqrt(eps)
};

/// Throws std::invalid_argument with the required first spacing when the wall
/// layer is under-resolved, or when eps, mu, kappa are out of range.
void check_layer_gate(const Grid& g, const ViscousParams& prm);

/// Snapshots u, v, h, g, omega, j with energy and dissipation per snapshot.
struct ViscousSolution {
  Trajectory traj;
  std::vector<double> energy, dissipation;
  double dt = 0.0;
  double max_courant = 0.0;
};

/// IMEX ARS(2,2,2): diffusion implicit per x-mode (banded in y), advection and
/// Lorentz terms explicit. Velocity and magnetic field are carried as stream
/// function and potential, so both are divergence-free for every state.
/// Wall: u = v = 0, g = 0, d_y h = 0. Top: v = 0, omega = 0 (free slip), g = 0,
/// d_y h = 0. These hold exactly in the discrete operators.
/// Throws on gate failure, CFL violation or non-finite state.
ViscousSolution solve_viscous_mhd(const VectorState& init, const ViscousParams& prm);

/// 1/2 int |u|^2 + |H|^2 with the fourth-order y-quadrature.
double energy(const VectorState& s);
/// eps (mu |grad u|^2 + kappa |grad H|^2) integrated over the domain.
double dissipation(const VectorState& s, double eps, double mu, double kappa, int order = 4);

/// Discrete energy law, cumulative from t = 0 at every even snapshot:
/// r(t_k) = E(t_k) - E(0) + int_0^t_k D dt (composite Simpson). Requires
/// uniform snapshots. With snapshots at every step the quadrature error is
/// O(dt^4) and r measures the time integrator.
struct EnergyBudget {
  std::vector<double> t, residual, dissipated;
  /// max |r| / total dissipated; when nothing dissipates, max |r| / max E.
  double max_relative = 0.0;
  bool dissipative = false;  // every Simpson window dissipates a nonnegative amount
};
EnergyBudget energy_budget(const Trajectory& traj, const ViscousParams& prm);

}  // namespace mhdbl
