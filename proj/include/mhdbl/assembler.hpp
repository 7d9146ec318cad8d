#pragma once

#include <array>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "mhdbl/bl0.hpp"
#include "mhdbl/bl1.hpp"
#include "mhdbl/cutoff.hpp"
#include "mhdbl/inner0.hpp"
#include "mhdbl/interp.hpp"
#include "mhdbl/jet.hpp"

namespace mhdbl {

/// Stage outputs the composite approximation is built from. All trajectories
/// share the snapshot times of inner0; layer fields live on one BL grid.
struct Constituents {
  InnerSolution inner0, inner1;
  TraceSeries trace0, trace1;
  BLProfile0 profile0;
  BLProfile1 profile1;
  PressureBL pressure;
  int order = 4;  // wall-normal operator order used for the jets
};

/// Throws std::invalid_argument naming the first mismatch in snapshot times,
/// grids or channels.
void check_constituents(const Constituents& c);

namespace detail {

/// Values of a jet at one point. For layer fields the y-slots are eta-derivatives.
struct J {
  double v = 0, t = 0, x = 0, y = 0, xx = 0, xy = 0, yy = 0;
};

/// Every quantity the remainder formulas read at one grid point (i, j).
struct Pt {
  double s = 0, y = 0, eta = 0;
  ChiJet chi;  // cutoff at y
  // inner fields; p0, p1 use only x and y
  J u0, v0, h0, g0, p0, u1, v1, h1, g1, p1;
  // layer fields; vb0, gb0, vb1, gb1 carry eta-derivatives from the
  // divergence relations, Ub1, Hb1 are the integrals of ub1, hb1 from the wall
  J ub0, vb0, hb0, gb0, ub1, vb1, hb1, gb1, Ub1, Hb1, P;
  // rho = -d_y h1(wall) eta chi(eta) and its antiderivative's d_x
  J rho, Rx;
  // wall traces at x_i
  double U0, H0, dyu0, dyv0, dyh0, dyg0, dyyv0, dyyg0, dxu0, dxh0, dxxu0, dxxh0;
  double dxyu0, dxyv0, dxyh0, dxyg0;
  double U1, V1, H1, G1, dyv1, dyg1, dxu1, dxv1, dxh1, dxg1;
  double V0b, G0b, dxV0b, dxG0b;
};

/// All jets on the assembly grid at one snapshot.
class Atoms {
 public:
  Atoms(const GridPtr& grid, int nx);
  Pt at(int i, int j) const;

  double s = 0.0;
  GridPtr grid;
  Jet u0, v0, h0, g0, p0, u1, v1, h1, g1, p1;
  Jet ub0, vb0, hb0, gb0, ub1, vb1, hb1, gb1, Ub1, Hb1, P;
  JetTrace tu0, tv0, th0, tg0, tu1, tv1, th1, tg1;
  std::vector<double> V0b, G0b, dxV0b, dxG0b;
  // d_y h1 on the wall and its derivatives, for rho
  std::vector<double> c, ct, cx, cxx, cxxx, cxt;
  std::vector<double> eta;
  std::vector<ChiJet> chi_y, chi_eta;
  std::vector<double> m1;  // chi_moment1(eta)
};

}  // namespace detail

/// Composite approximation at one value of eps, evaluated lazily per snapshot
/// on a wall-clustered Grid2D. Layer fields are read at eta = y/sqrt(eps) by
/// cubic interpolation; beyond the layer domain decaying fields take zero and
/// the wall-integrated ones (vb1, gb1, and the integrals of ub1, hb1) hold
/// their last value.
class ApproxSolution {
 public:
  ApproxSolution(double eps, std::shared_ptr<const Constituents> parts, GridPtr grid);

  double eps() const { return eps_; }
  const GridPtr& grid() const { return grid_; }
  const Constituents& parts() const { return *parts_; }
  const std::vector<double>& times() const { return parts_->inner0.traj.times(); }
  int size() const { return static_cast<int>(times().size()); }

  detail::Atoms atoms(int k) const;

  /// u^a, v^a, h^a, g^a and p^a at snapshot k.
  VectorState fields(int k) const;
  /// Comparand of the convergence estimate:
  /// (u0, v0, h0, g0) + (ub0, sqrt(eps) vb0, hb0, sqrt(eps) gb0)(y/sqrt(eps)).
  VectorState leading_order(int k) const;

  struct Auxiliary {
    Field tau_u, tau_h, tau_g, ub1, vb1, hb1, gb1;  // tilde profiles
  };
  Auxiliary auxiliary(int k) const;

 private:
  double eps_;
  std::shared_ptr<const Constituents> parts_;
  GridPtr grid_;
  Trajectory integrals_;  // Ub1, Hb1 on the layer grid
  ColumnInterp inner_ci_, layer_ci_;
};

/// Eps-dependent assembly grid: tanh clustering with first spacing at most
/// sqrt(eps)/points_per_layer, covering the inner domain.
GridPtr assembly_grid(double eps, int nx, int ny, double Ly, double points_per_layer = 16.0);

/// Remainder fields at one snapshot. r1 and rh already carry their
/// sqrt(eps) chi and eps factors, so total = r0 + r1 + rc + rh.
struct RemainderParts {
  Field total, r0, r1, rc, rh;
};

struct RemainderSnapshot {
  double time = 0.0;
  std::array<RemainderParts, 4> R;
  /// Residual of the viscous system by the chain rule on the jets.
  std::array<Field, 4> direct;
  /// Stage residuals: defects of the inner, layer, pressure-layer and
  /// wall-data equations the decomposition assumes exact.
  std::array<Field, 4> stage;
  /// max|direct - total - stage| relative to the largest term of direct.
  std::array<double, 4> identity_defect{};
};

RemainderSnapshot remainder_snapshot(const ApproxSolution& a, int k, double mu, double kappa);

/// L2 norms per evaluated snapshot.
struct RemainderReport {
  double eps = 0.0;
  std::vector<int> snapshots;
  std::vector<double> times;
  std::vector<std::array<double, 4>> l2, r0, r1, rc, rh, stage, direct, identity_defect;
  /// max over times of l2 per component
  std::array<double, 4> sup_l2() const;
};

/// Interior snapshots only (k in [1, size-2]); others are rejected.
RemainderReport remainders(const ApproxSolution& a, double mu, double kappa, const std::vector<int>& snapshots);

struct NormRow {
  double time = 0.0;
  int i = 0, alpha_t = 0, alpha_x = 0;
  double l2 = 0.0;
};

/// Table of ||d_t^a d_x^b R_i||_L2 for a + b <= max_order at each snapshot.
/// Time derivatives use centered differences of R over neighbouring snapshots;
/// when those are missing the time order is lowered with a warning.
std::vector<NormRow> remainder_norms(const ApproxSolution& a, double mu, double kappa,
                                     const std::vector<int>& snapshots, int max_order = 2);

/// CSV with header time,i,alpha_t,alpha_x,l2_norm.
void write_remainder_csv(const std::vector<NormRow>& rows, const std::filesystem::path& path);
std::vector<NormRow> read_remainder_csv(const std::filesystem::path& path);

/// Boundary conditions, divergence and initial data of the assembled fields.
/// Jet values are exact up to roundoff; the fd values use the assembly grid's
/// order-4 operators and carry its truncation.
struct StructureCheck {
  double wall_u = 0, wall_v = 0, wall_dyh = 0, wall_g = 0;
  double div_u = 0, div_h = 0;
  double div_u_fd = 0, div_h_fd = 0;
  double div_scale = 0;  // max |d_x u^a| for relative reporting
};
StructureCheck check_structure(const ApproxSolution& a, int k);

/// Max difference between the assembled fields at t = 0 and the initial data
/// (u0, v0, h0, g0) of inner0.
double initial_defect(const ApproxSolution& a);

/// Residual of the viscous system from finite differences of the assembled
/// fields on the assembly grid, compared with the decomposition plus stage
/// residuals. trunc is the change of that residual between the order-2 and
/// order-4 wall-normal operators.
struct DirectCheck {
  std::array<double, 4> mismatch{}, reference{}, trunc{};
};
DirectCheck check_direct_fd(const ApproxSolution& a, int k, double mu, double kappa);

}  // namespace mhdbl
