#pragma once

#include <functional>
#include <vector>

#include "mhdbl/field.hpp"
#include "mhdbl/linalg.hpp"

namespace mhdbl {

/// Prognostic variables shared by the ideal, linearized and viscous solvers.
/// Velocity is u = Um(y) + D_y psi, v = -d_x psi, where psi solves
/// (D2 + d_xx) psi = -w; the magnetic field is h = Hm(y) + D_y a, g = -d_x a.
/// Both fields are therefore discretely divergence-free for every state.
/// w and a carry no x-mean.
struct InnerVars {
  std::vector<double> Um, Hm;
  Field w, a;

  InnerVars() = default;
  explicit InnerVars(const GridPtr& g);

  InnerVars& axpy(double c, const InnerVars& o);
  InnerVars& operator*=(double c);
  void dealias();
  void check_finite(const std::string& what) const;
};

/// Fields derived from an InnerVars and its stream function.
struct InnerFields {
  Field u, v, h, g, psi, omega, j;
};

/// Per-mode banded Dirichlet solver for (D2 - k^2) psi = -w with psi given at
/// the wall and psi = 0 on the top row.
class StreamSolver {
 public:
  StreamSolver() = default;
  StreamSolver(GridPtr g, int order);

  /// psi_wall must have zero x-mean; its mean is discarded.
  Field solve(const Field& w, const std::vector<double>& psi_wall) const;

  int order() const { return order_; }
  const GridPtr& grid() const { return grid_; }

 private:
  GridPtr grid_;
  int order_ = 4;
  std::vector<BandMatrix> lu_;
};

/// Column profile broadcast along x.
Field broadcast(const GridPtr& g, const std::vector<double>& prof, const std::string& label = {});
std::vector<double> x_mean(const Field& f);
/// f minus its x-mean.
Field fluctuation(const Field& f);
/// Apply the 1D y-operator to a column profile.
std::vector<double> apply_y(const GridPtr& g, const std::vector<double>& prof, int deriv, int order);

/// m-th spectral x-derivative of a wall-parallel line.
std::vector<double> dx_line(const std::vector<double>& v, int m = 1);

InnerFields derive_fields(const InnerVars& s, const Field& psi, int order);

/// Bilinear flux pieces: F = u_A omega_B - h_A j_B, G = v_A omega_B - g_A j_B,
/// e = u_A g_B - v_A h_B. The nonlinear flux is flux(A, A); the linearization
/// about A is flux(A, B) + flux(B, A).
struct Flux {
  Field F, G, e;
  Flux& operator+=(const Flux& o);
};
Flux bilinear_flux(const InnerFields& A, const InnerFields& B);

/// Time derivative of InnerVars produced by a flux:
/// Um_t = <G>, w_t = -d_x F - D_y(G - <G>), Hm_t = D_y<e>, a_t = e - <e>.
InnerVars flux_tendency(const Flux& f, int order);

/// Modified pressure Pi with u_t = -d_x Pi + G and v_t = -d_y Pi - F.
/// Pi' comes from the x-momentum balance, <Pi> from integrating -<F> down from
/// the top (where <Pi> = 0).
Field modified_pressure(const Flux& f, const Field& psi_t, int order);

/// Kinetic-minus-magnetic energy density term |u|^2/2 - |H|^2/2, or its
/// linearization about the first argument when B is given.
Field pressure_shift(const InnerFields& A, const InnerFields* B);

/// Domain energy 1/2 int (|u|^2 + |H|^2) and cross helicity int u.H, with
/// trapezoidal y-weights.
double field_energy(const Field& u, const Field& v, const Field& h, const Field& g);
double cross_helicity(const Field& u, const Field& v, const Field& h, const Field& g);

/// Largest advective Courant number dt*(|u|/dx + |v|/dy) over the grid.
double courant(const Field& u, const Field& v, double dt);

/// Convert primitive (u, v, h, g) to InnerVars: psi' = -inv_dx(v), a' = -inv_dx(g),
/// w' = -(D2 + d_xx) psi' so that the stream solve reproduces psi'.
InnerVars vars_from_primitive(const VectorState& s, int order);

/// One SSP-RK3 step of ds/dt = rhs(s, t). `fix` is applied after each stage
/// (boundary rows, dealiasing).
void ssprk3_step(InnerVars& s, double t, double dt,
                 const std::function<InnerVars(const InnerVars&, double)>& rhs,
                 const std::function<void(InnerVars&, double)>& fix);

}  // namespace mhdbl
