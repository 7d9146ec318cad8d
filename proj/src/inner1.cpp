#include "mhdbl/inner1.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mhdbl/inner_core.hpp"
#include "mhdbl/ops.hpp"
#include "mhdbl/spectral.hpp"

namespace mhdbl {

namespace {

// Trapezoidal integral over the whole column of d_x f, one value per x.
std::vector<double> column_integral_dx(const Field& f) {
  const Grid& g = f.grid();
  Field fx = ddx(f);
  std::vector<double> out(g.nx(), 0.0);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) out[i] += g.wy()[j] * fx(i, j);
  return out;
}

std::vector<double> neg_inv_dx(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  spectral::inv_dx(v.data(), out.data(), static_cast<int>(v.size()), 1);
  for (auto& x : out) x = -x;
  return out;
}

void require_zero_mean(const std::vector<double>& v, double t, const char* ch) {
  double m = 0.0, s = 0.0;
  for (double x : v) {
    m += x;
    s = std::max(s, std::abs(x));
  }
  m /= static_cast<double>(v.size());
  if (std::abs(m) > 1e-10 * std::max(s, 1.0)) {
    std::ostringstream os;
    os << "solve_linearized_mhd: wall data " << ch << " has nonzero x-mean " << m << " at t=" << t;
    throw std::invalid_argument(os.str());
  }
}

class WallData {
 public:
  explicit WallData(const TraceSeries& w) : w_(w) {}

  std::vector<double> psi(double t) const { return neg_inv_dx(checked("v", t)); }
  std::vector<double> a(double t) const { return neg_inv_dx(checked("g", t)); }

  /// d_t of the psi wall row: snapshot derivative when t is a stored time,
  /// otherwise a centered difference of the cubic interpolant.
  std::vector<double> psi_t(double t) const {
    const auto& ts = w_.times();
    for (int k = 0; k < w_.size(); ++k)
      if (std::abs(ts[k] - t) <= 1e-12 * std::max(1.0, ts.back())) return neg_inv_dx(w_.ddt("v", k));
    double d = 1e-4 * (ts.back() - ts.front()) / std::max(1, w_.size() - 1);
    double lo = std::max(ts.front(), t - d), hi = std::min(ts.back(), t + d);
    auto a = w_.interp("v", lo), b = w_.interp("v", hi);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = (b[i] - a[i]) / (hi - lo);
    return neg_inv_dx(a);
  }

 private:
  std::vector<double> checked(const char* ch, double t) const {
    auto v = w_.interp(ch, t);
    require_zero_mean(v, t, ch);
    return v;
  }
  const TraceSeries& w_;
};

InnerFields background_at(const Trajectory& bg, double t) {
  InnerFields f;
  f.u = bg.interp("u", t);
  f.v = bg.interp("v", t);
  f.h = bg.interp("h", t);
  f.g = bg.interp("g", t);
  f.omega = bg.interp("omega", t);
  f.j = bg.interp("j", t);
  return f;
}

Flux linear_flux(const InnerFields& B, const InnerFields& f) {
  Flux fl = bilinear_flux(B, f);
  fl += bilinear_flux(f, B);
  return fl;
}

}  // namespace

TraceSeries bc_from_profile0(const BLProfile0& prof) {
  const Trajectory& tr = prof.traj;
  TraceSeries out(tr.grid()->nx());
  for (int k = 0; k < tr.size(); ++k) {
    out.add_time(tr.times()[k]);
    auto v = column_integral_dx(tr.at(k, "ub0")), g = column_integral_dx(tr.at(k, "hb0"));
    for (auto& x : v) x = -x;
    for (auto& x : g) x = -x;
    out.set("v", k, std::move(v));
    out.set("g", k, std::move(g));
  }
  return out;
}

InnerSolution solve_linearized_mhd(const InnerSolution& background, const TraceSeries& wall, double T, double dt,
                                   const InnerOptions& opt) {
  const Trajectory& bg = background.traj;
  const GridPtr& g = bg.grid();
  wall.require({"v", "g"}, "solve_linearized_mhd");
  if (wall.nx() != g->nx()) throw std::invalid_argument("solve_linearized_mhd: wall data and grid nx differ");
  for (const char* n : {"u", "v", "h", "g", "omega", "j"})
    if (!bg.has(n)) throw std::invalid_argument(std::string("solve_linearized_mhd: background lacks ") + n);
  double tol = 1e-9 * std::max(1.0, T);
  if (bg.times().back() < T - tol || wall.times().back() < T - tol)
    throw std::invalid_argument("solve_linearized_mhd: background or wall data end before T");

  StepPlan plan = plan_steps(T, opt.dt_snap, dt);
  InnerSolution sol;
  sol.order = opt.order;
  sol.dt = plan.dt;
  sol.traj = Trajectory(g, {"u", "v", "h", "g", "p", "omega", "j"});
  StreamSolver solver(g, opt.order);
  WallData wd(wall);

  auto fields = [&](const InnerVars& st, double t) { return derive_fields(st, solver.solve(st.w, wd.psi(t)), opt.order); };
  auto rhs = [&](const InnerVars& st, double t) {
    return flux_tendency(linear_flux(background_at(bg, t), fields(st, t)), opt.order);
  };
  auto fix = [&](InnerVars& st, double t) {
    st.dealias();
    auto aw = wd.a(t);
    std::copy(aw.begin(), aw.end(), st.a.row(0));
  };
  auto record = [&](const InnerVars& st, double t) {
    InnerFields B = background_at(bg, t);
    InnerFields f = fields(st, t);
    Flux fl = linear_flux(B, f);
    InnerVars ds = flux_tendency(fl, opt.order);
    Field psi_t = solver.solve(ds.w, wd.psi_t(t));
    Field p = modified_pressure(fl, psi_t, opt.order) - pressure_shift(B, &f);
    sol.energy.push_back(field_energy(f.u, f.v, f.h, f.g));
    sol.cross_helicity.push_back(cross_helicity(f.u, f.v, f.h, f.g));
    sol.traj.push(t, {f.u, f.v, f.h, f.g, p, f.omega, f.j});
  };

  InnerVars s(g);
  fix(s, 0.0);
  record(s, 0.0);
  double t = 0.0;
  for (int k = 1; k <= plan.snapshots; ++k) {
    for (int m = 0; m < plan.substeps; ++m) {
      InnerFields B = background_at(bg, t);
      double c = courant(B.u, B.v, plan.dt);
      sol.max_courant = std::max(sol.max_courant, c);
      if (c > opt.cfl_max) {
        std::ostringstream os;
        os << "solve_linearized_mhd: CFL violation at t=" << t << " (Courant " << c << " > " << opt.cfl_max << ")";
        throw std::runtime_error(os.str());
      }
      ssprk3_step(s, t, plan.dt, rhs, fix);
      t = ((k - 1) * plan.substeps + m + 1) * plan.dt;
      s.check_finite("solve_linearized_mhd at t=" + std::to_string(t));
    }
    t = k * opt.dt_snap;
    record(s, t);
  }
  return sol;
}

}  // namespace mhdbl
