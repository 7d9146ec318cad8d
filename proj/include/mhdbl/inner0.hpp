#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mhdbl/field.hpp"
#include "mhdbl/trajectory.hpp"

namespace mhdbl {

enum class Preset { UniformField, StationaryShear, NumericalInner };
Preset parse_preset(const std::string& name);
std::string preset_name(Preset p);

/// Shape parameters of the built-in initial data.
struct PresetParams {
  double h_uniform = 1.0;
  // U(y) = u_wall + u_amp (1 - exp(-y)), H(y) = h_wall + h_amp (1 - exp(-y)).
  double shear_u_wall = 0.5, shear_u_amp = 0.5;
  double shear_h_wall = 1.0, shear_h_amp = 0.5;
  // psi0 = amp_u sin x y^2 e^{-2y}, A0 = y + amp_h cos x (y + 2y^2) e^{-2y}:
  // u0 = 0 and d_y h0 = 0 on the wall, h0(x,0) = 1 + amp_h cos x.
  double amp_u = 0.5, amp_h = 0.3;
};

/// Analytic initial fields as functions of (x, y).
struct InitialData {
  std::function<double(double, double)> u, v, h, g;
};
InitialData preset_initial_data(Preset p, const PresetParams& prm);
VectorState sample(const InitialData& d, const GridPtr& g);

/// Report of validate_initial_data. compat0 is max|u0(x,0)|, the zeroth-order
/// compatibility of the layer data; it is reported, not enforced.
struct InitCheck {
  double div_u = 0.0, div_h = 0.0;  // relative to the field scale
  double wall_v = 0.0, wall_g = 0.0;
  double min_hbar = 0.0, margin = 0.0;  // margin = min_hbar - delta0
  double compat0 = 0.0;
};

struct InitTolerances {
  double div_rel = 1e-2;
  double wall = 1e-10;
};

/// Throws std::invalid_argument when the data is not divergence-free, violates
/// v = g = 0 at the wall, or has h0(x,0) < delta0 (the message carries the margin).
InitCheck validate_initial_data(const VectorState& s, double delta0, const InitTolerances& tol = {});

struct InnerOptions {
  double dt_snap = 0.01;
  int order = 4;
  double cfl_max = 1.0;
};

/// Snapshot series of an inner solve. traj holds u, v, h, g, p, omega, j.
struct InnerSolution {
  Trajectory traj;
  int order = 4;
  std::vector<double> energy, cross_helicity;
  double max_courant = 0.0;
  double dt = 0.0;
};

/// Snapshot count and step size for [0, T]; dt is reduced so that a whole
/// number of steps fits in each snapshot interval.
struct StepPlan {
  int snapshots = 0, substeps = 0;
  double dt = 0.0;
};
StepPlan plan_steps(double T, double dt_snap, double dt);

/// Ideal incompressible MHD on the inner grid (periodic x, wall at y=0, rigid
/// lid at the top) with SSP-RK3 and 2/3 dealiasing.
InnerSolution solve_ideal_mhd(const VectorState& init, double T, double dt, const InnerOptions& opt = {});

/// Wall traces per snapshot. For f in {u,v,h,g}: f, dy_f, dyy_f (dyy is D_y
/// applied twice); also p, dx_p, dy_p.
TraceSeries extract_trace(const Trajectory& traj, int order);

}  // namespace mhdbl
