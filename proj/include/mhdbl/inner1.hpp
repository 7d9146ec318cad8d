#pragma once

#include "mhdbl/bl0.hpp"
#include "mhdbl/inner0.hpp"
#include "mhdbl/trajectory.hpp"

namespace mhdbl {

/// Wall data of the first-order inner problem, channels v and g:
/// (v, g)(t, x, 0) = -(v_b0, g_b0)(t, x, 0) = -(int_0^inf d_x u_b0, int_0^inf d_x h_b0).
/// The integrals are recomputed from the ub0/hb0 columns (trapezoid).
TraceSeries bc_from_profile0(const BLProfile0& prof);

/// Linearized ideal MHD about `background` with zero initial data and the
/// normal wall data (v, g) from `wall`. Shares the discretization of
/// solve_ideal_mhd; the background is interpolated cubically in time.
/// The result's traj holds u, v, h, g, p, omega, j of the perturbation and
/// `energy` its quadratic energy.
InnerSolution solve_linearized_mhd(const InnerSolution& background, const TraceSeries& wall, double T, double dt,
                                   const InnerOptions& opt = {});

}  // namespace mhdbl
