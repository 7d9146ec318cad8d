#include "mhdbl/viscous.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "mhdbl/fd.hpp"
#include "mhdbl/inner0.hpp"
#include "mhdbl/inner_core.hpp"
#include "mhdbl/linalg.hpp"
#include "mhdbl/ops.hpp"
#include "mhdbl/spectral.hpp"

namespace mhdbl {

using spectral::cplx;

void check_layer_gate(const Grid& g, const ViscousParams& prm) {
  if (!(prm.eps > 0.0 && prm.eps <= 1.0)) throw std::invalid_argument("viscous: eps must lie in (0, 1]");
  if (!(prm.mu > 0.0) || !(prm.kappa > 0.0)) throw std::invalid_argument("viscous: mu and kappa must be positive");
  double dy0 = g.y(1) - g.y(0), need = prm.gate * std::sqrt(prm.eps);
  if (dy0 > need * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "viscous: wall layer under-resolved, first spacing " << dy0 << " > " << need << " (= " << prm.gate
       << " sqrt(eps) at eps=" << prm.eps << "); use a clustered grid with dy0 <= " << need;
    throw std::invalid_argument(os.str());
  }
}

namespace {

// Row j of the composition D1 D1 as (column, weight) pairs.
std::vector<std::pair<int, double>> d1d1_row(const YOperator& D1, int j) {
  std::vector<std::pair<int, double>> r;
  for (int q = 0; q < D1.count(j); ++q) {
    int m = D1.start(j) + q;
    for (int s = 0; s < D1.count(m); ++s) {
      int c = D1.start(m) + s;
      auto it = std::find_if(r.begin(), r.end(), [c](const auto& e) { return e.first == c; });
      double w = D1.w(j)[q] * D1.w(m)[s];
      if (it == r.end())
        r.emplace_back(c, w);
      else
        it->second += w;
    }
  }
  return r;
}

/// Factored implicit operators (I - c L) for one value of c = gamma dt.
class ImplicitSolver {
 public:
  ImplicitSolver(const GridPtr& g, const ViscousParams& prm, double c) : g_(g), nx_(g->nx()), ny_(g->ny()) {
    const int N = ny_ - 1, nm = spectral::nmodes(nx_);
    const YOperator &D1 = g->op(1, prm.order), &D2 = g->op(2, prm.order);
    const double cu = c * prm.mu * prm.eps, ch = c * prm.kappa * prm.eps;
    auto wall_row = d1d1_row(D1, 0), top_row = d1d1_row(D1, N);
    int bw = 0;
    for (int j = 0; j < ny_; ++j)
      for (const YOperator* op : {&D1, &D2})
        bw = std::max({bw, j - op->start(j), op->start(j) + op->count(j) - 1 - j});
    for (const auto& e : wall_row) bw = std::max(bw, e.first + 1);
    for (const auto& e : top_row) bw = std::max(bw, N - 1 - e.first);

    auto diffusion = [&](BandMatrix& m, int j, double cc, double k2) {
      m.add(j, j, 1.0 + cc * k2);
      for (int q = 0; q < D2.count(j); ++q) m.add(j, D2.start(j) + q, -cc * D2.w(j)[q]);
    };
    // x-mean of u: u = 0 at the wall, d_y u = 0 at the top
    um_ = BandMatrix(ny_, bw, bw);
    for (int q = 0; q < D1.count(N); ++q) um_.add(N, D1.start(N) + q, D1.w(N)[q]);
    um_.add(0, 0, 1.0);
    for (int j = 1; j < N; ++j) diffusion(um_, j, cu, 0.0);
    um_.factor();
    // x-mean of h: d_y h = 0 at both ends
    hm_ = BandMatrix(ny_, bw, bw);
    for (int r : {0, N})
      for (int q = 0; q < D1.count(r); ++q) hm_.add(r, D1.start(r) + q, D1.w(r)[q]);
    for (int j = 1; j < N; ++j) diffusion(hm_, j, ch, 0.0);
    hm_.factor();

    kmax_ = nx_ / 3;
    vort_.resize(kmax_ + 1);
    pot_.resize(kmax_ + 1);
    for (int k = 1; k <= kmax_ && k < nm; ++k) {
      const double k2 = static_cast<double>(k) * k;
      // Interleaved (psi_j, w_j). Rows: psi_0 = 0, D1 psi_0 = 0 (no slip),
      // (D2 - k^2) psi + w = 0 and (I - c mu eps (D2 - k^2)) w = rhs inside,
      // psi_N = 0 and w_N = 0 (stress-free top).
      BandMatrix m(2 * ny_, 2 * bw + 2, 2 * bw + 2);
      m.add(0, 0, 1.0);
      for (int q = 0; q < D1.count(0); ++q) m.add(1, 2 * (D1.start(0) + q), D1.w(0)[q]);
      for (int j = 1; j < N; ++j) {
        for (int q = 0; q < D2.count(j); ++q) {
          int col = D2.start(j) + q;
          m.add(2 * j, 2 * col, D2.w(j)[q]);
          m.add(2 * j + 1, 2 * col + 1, -cu * D2.w(j)[q]);
        }
        m.add(2 * j, 2 * j, -k2);
        m.add(2 * j, 2 * j + 1, 1.0);
        m.add(2 * j + 1, 2 * j + 1, 1.0 + cu * k2);
      }
      m.add(2 * N, 2 * N, 1.0);
      m.add(2 * N + 1, 2 * N + 1, 1.0);
      m.factor();
      vort_[k] = std::move(m);
      // Potential: a = 0 and D1 D1 a = 0 (d_y h = 0) at both ends; the
      // Neumann rows replace the diffusion rows next to each boundary.
      BandMatrix p(ny_, bw, bw);
      p.add(0, 0, 1.0);
      for (const auto& e : wall_row) p.add(1, e.first, e.second);
      for (int j = 2; j < N - 1; ++j) diffusion(p, j, ch, k2);
      for (const auto& e : top_row) p.add(N - 1, e.first, e.second);
      p.add(N, N, 1.0);
      p.factor();
      pot_[k] = std::move(p);
    }
  }

  /// Solve (I - c L) y = r with the boundary rows of r ignored.
  InnerVars solve(const InnerVars& r) const {
    const int N = ny_ - 1, nm = spectral::nmodes(nx_);
    InnerVars y(g_);
    y.Um = r.Um;
    y.Um[0] = 0.0;
    y.Um[N] = 0.0;
    um_.solve(y.Um);
    y.Hm = r.Hm;
    y.Hm[0] = 0.0;
    y.Hm[N] = 0.0;
    hm_.solve(y.Hm);

    std::vector<cplx> cw(static_cast<std::size_t>(nm) * ny_), ca(cw.size());
    spectral::forward(r.w.data(), cw.data(), nx_, ny_);
    spectral::forward(r.a.data(), ca.data(), nx_, ny_);
    std::vector<double> col(4 * static_cast<std::size_t>(ny_));
    std::vector<cplx> pa(ny_);
    auto at = [nm](std::vector<cplx>& c, int j, int k) -> cplx& { return c[static_cast<std::size_t>(j) * nm + k]; };
    for (int k = 0; k < nm; ++k) {
      if (k == 0 || k > kmax_) {
        for (int j = 0; j < ny_; ++j) at(cw, j, k) = at(ca, j, k) = 0.0;
        continue;
      }
      // two real right-hand sides (real and imaginary parts)
      std::fill(col.begin(), col.end(), 0.0);
      for (int j = 1; j < N; ++j) {
        col[2 * j + 1] = at(cw, j, k).real();
        col[2 * ny_ + 2 * j + 1] = at(cw, j, k).imag();
      }
      vort_[k].solve(col.data(), 2);
      for (int j = 0; j < ny_; ++j) at(cw, j, k) = {col[2 * j + 1], col[2 * ny_ + 2 * j + 1]};
      for (int j = 0; j < ny_; ++j) pa[j] = (j >= 2 && j <= N - 2) ? at(ca, j, k) : cplx(0.0);
      pot_[k].solve(pa);
      for (int j = 0; j < ny_; ++j) at(ca, j, k) = pa[j];
    }
    spectral::backward(cw.data(), y.w.data(), nx_, ny_);
    spectral::backward(ca.data(), y.a.data(), nx_, ny_);
    return y;
  }

 private:
  GridPtr g_;
  int nx_, ny_, kmax_ = 0;
  BandMatrix um_, hm_;
  std::vector<BandMatrix> vort_, pot_;
};

VectorState primitive(const InnerFields& f) { return {f.u, f.v, f.h, f.g, std::nullopt}; }

}  // namespace

double energy(const VectorState& s) { return 0.5 * integrate_xy(s.u * s.u + s.v * s.v + s.h * s.h + s.g * s.g); }

double dissipation(const VectorState& s, double eps, double mu, double kappa, int order) {
  auto grad2 = [order](const Field& a, const Field& b) {
    Field ax = ddx(a), ay = ddy(a, order), bx = ddx(b), by = ddy(b, order);
    return integrate_xy(ax * ax + ay * ay + bx * bx + by * by);
  };
  return eps * (mu * grad2(s.u, s.v) + kappa * grad2(s.h, s.g));
}

ViscousSolution solve_viscous_mhd(const VectorState& init, const ViscousParams& prm) {
  const GridPtr& g = init.u.grid_ptr();
  check_layer_gate(*g, prm);
  InitCheck ic = validate_initial_data(init, 0.0);
  if (ic.compat0 > 1e-10) spdlog::warn("solve_viscous_mhd: initial wall slip {:.3e}; no-slip is imposed from the first step", ic.compat0);
  StepPlan plan = plan_steps(prm.T, prm.dt_snap, prm.dt);
  const int order = prm.order;
  const double dt = plan.dt, gam = 1.0 - 1.0 / std::sqrt(2.0), del = 1.0 - 1.0 / (2.0 * gam);
  ImplicitSolver implicit(g, prm, gam * dt);
  StreamSolver stream(g, order);
  const std::vector<double> zero(g->nx(), 0.0);

  ViscousSolution sol;
  sol.dt = dt;
  sol.traj = Trajectory(g, {"u", "v", "h", "g", "omega", "j"});
  auto fields = [&](const InnerVars& s) { return derive_fields(s, stream.solve(s.w, zero), order); };
  auto explicit_part = [&](const InnerFields& f) { return flux_tendency(bilinear_flux(f, f), order); };
  auto record = [&](const InnerVars& s, double t) {
    InnerFields f = fields(s);
    VectorState p = primitive(f);
    sol.energy.push_back(energy(p));
    sol.dissipation.push_back(dissipation(p, prm.eps, prm.mu, prm.kappa, order));
    sol.traj.push(t, {f.u, f.v, f.h, f.g, f.omega, f.j});
  };

  InnerVars s = vars_from_primitive(init, order);
  record(s, 0.0);
  for (int k = 1; k <= plan.snapshots; ++k) {
    for (int m = 0; m < plan.substeps; ++m) {
      double t = ((k - 1) * plan.substeps + m) * dt;
      InnerFields f = fields(s);
      double cr = courant(f.u, f.v, dt);
      sol.max_courant = std::max(sol.max_courant, cr);
      if (cr > prm.cfl_max) {
        std::ostringstream os;
        os << "solve_viscous_mhd: CFL violation at t=" << t << " (Courant " << cr << " > " << prm.cfl_max << ")";
        throw std::runtime_error(os.str());
      }
      // ARS(2,2,2)
      InnerVars e1 = explicit_part(f);
      InnerVars r2 = s;
      r2.axpy(gam * dt, e1);
      InnerVars y2 = implicit.solve(r2);
      InnerVars i2 = y2;
      i2.axpy(-1.0, r2);
      i2 *= 1.0 / (gam * dt);
      InnerVars e2 = explicit_part(fields(y2));
      InnerVars r3 = s;
      r3.axpy(del * dt, e1);
      r3.axpy((1.0 - del) * dt, e2);
      r3.axpy((1.0 - gam) * dt, i2);
      s = implicit.solve(r3);
      s.check_finite("solve_viscous_mhd at t=" + std::to_string(t + dt));
    }
    record(s, k * prm.dt_snap);
  }
  return sol;
}

EnergyBudget energy_budget(const Trajectory& traj, const ViscousParams& prm) {
  const int K = traj.size();
  if (K < 3) throw std::invalid_argument("energy_budget: need at least 3 snapshots");
  const auto& t = traj.times();
  const double d = t[1] - t[0];
  for (int k = 1; k < K; ++k)
    if (std::abs(t[k] - t[k - 1] - d) > 1e-9 * d) throw std::invalid_argument("energy_budget: snapshots must be uniform");
  std::vector<double> E(K), D(K);
  for (int k = 0; k < K; ++k) {
    VectorState s{traj.at(k, "u"), traj.at(k, "v"), traj.at(k, "h"), traj.at(k, "g"), std::nullopt};
    E[k] = energy(s);
    D[k] = dissipation(s, prm.eps, prm.mu, prm.kappa, prm.order);
  }
  EnergyBudget b;
  b.dissipative = true;
  double acc = 0.0, rmax = 0.0;
  for (int k = 0; k + 2 < K; k += 2) {
    double w = d / 3.0 * (D[k] + 4.0 * D[k + 1] + D[k + 2]);
    b.dissipative = b.dissipative && w >= 0.0;
    acc += w;
    double r = E[k + 2] - E[0] + acc;
    b.t.push_back(t[k + 2]);
    b.residual.push_back(r);
    b.dissipated.push_back(acc);
    rmax = std::max(rmax, std::abs(r));
  }
  double emax = *std::max_element(E.begin(), E.end());
  // below this nothing measurable dissipates and r is roundoff in E
  if (acc > 1e-12 * emax)
    b.max_relative = rmax / acc;
  else
    b.max_relative = emax > 0.0 ? rmax / emax : rmax;
  return b;
}

}  // namespace mhdbl
