#pragma once

#include "mhdbl/bl0.hpp"
#include "mhdbl/trajectory.hpp"

namespace mhdbl {

/// Pressure layer corrector at the profile snapshot times: pb1 by tail
/// quadrature plus the local bracket, dpb1 from the pre-integrated formula.
struct PressureBL {
  Trajectory traj;  // pb1, dpb1
};

/// trace0 needs u, h, dy_v, dy_g; trace1 needs v, g. Both share the profile's
/// times. d_t v_b0 is the snapshot time derivative.
PressureBL pressure_corrector(const BLProfile0& prof, const TraceSeries& trace0, const TraceSeries& trace1,
                              double mu, int order = 4);

/// First-order layer (ub1, vb1, hb1, gb1) at the profile snapshot times.
/// vb1 = -int_0^eta d_x ub1 and gb1 = -int_0^eta d_x hb1 do not decay.
struct BLProfile1 {
  Trajectory traj;
  double far_field = 0.0;  // max |ub1| on the top row over all snapshots
  double max_courant = 0.0;
  double dt = 0.0;
};

/// Channels needed from the traces: trace0 u, v, h, g, dy_u, dy_v, dy_h, dy_g,
/// dyy_v, dyy_g; trace1 u, v, h, g, dy_v, dy_g.
BLProfile1 solve_bl1(const BLProfile0& prof, const TraceSeries& trace0, const TraceSeries& trace1, double dt,
                     const BLOptions& opt = {});

/// Magnetic wall corrector rho = -d_y h1(t,x,0) eta chi(eta), with
/// Rh = int_0^eta rho and dxRh = d_x Rh, all closed-form in eta.
struct RhoCorrector {
  Trajectory traj;  // rho, Rh, dxRh
};
RhoCorrector boundary_corrector_rho(const TraceSeries& trace1, const GridPtr& blgrid);

/// Max residual of the first-order layer equations relative to their largest
/// term, over interior snapshots with t >= t_min.
struct Profile1Residual {
  double u = 0.0, h = 0.0;
};
Profile1Residual check_profile1_consistency(const BLProfile1& p1, const BLProfile0& prof, const TraceSeries& trace0,
                                            const TraceSeries& trace1, const BLOptions& opt = {}, double t_min = 0.1);

}  // namespace mhdbl
