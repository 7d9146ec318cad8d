#include "mhdbl/inner0.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mhdbl/inner_core.hpp"
#include "mhdbl/ops.hpp"

namespace mhdbl {

Preset parse_preset(const std::string& name) {
  if (name == "uniform_field") return Preset::UniformField;
  if (name == "stationary_shear") return Preset::StationaryShear;
  if (name == "numerical_inner") return Preset::NumericalInner;
  throw std::invalid_argument("unknown preset '" + name +
                              "' (expected uniform_field, stationary_shear or numerical_inner)");
}

std::string preset_name(Preset p) {
  switch (p) {
    case Preset::UniformField: return "uniform_field";
    case Preset::StationaryShear: return "stationary_shear";
    case Preset::NumericalInner: return "numerical_inner";
  }
  return "?";
}

InitialData preset_initial_data(Preset p, const PresetParams& prm) {
  InitialData d;
  auto zero = [](double, double) { return 0.0; };
  switch (p) {
    case Preset::UniformField: {
      double h0 = prm.h_uniform;
      d.u = zero;
      d.v = zero;
      d.g = zero;
      d.h = [h0](double, double) { return h0; };
      break;
    }
    case Preset::StationaryShear: {
      double uw = prm.shear_u_wall, ua = prm.shear_u_amp, hw = prm.shear_h_wall, ha = prm.shear_h_amp;
      d.u = [uw, ua](double, double y) { return uw + ua * (1.0 - std::exp(-y)); };
      d.h = [hw, ha](double, double y) { return hw + ha * (1.0 - std::exp(-y)); };
      d.v = zero;
      d.g = zero;
      break;
    }
    case Preset::NumericalInner: {
      double au = prm.amp_u, ah = prm.amp_h;
      d.u = [au](double x, double y) { return au * std::sin(x) * (2.0 * y - 2.0 * y * y) * std::exp(-2.0 * y); };
      d.v = [au](double x, double y) { return -au * std::cos(x) * y * y * std::exp(-2.0 * y); };
      d.h = [ah](double x, double y) {
        return 1.0 + ah * std::cos(x) * (1.0 + 2.0 * y - 4.0 * y * y) * std::exp(-2.0 * y);
      };
      d.g = [ah](double x, double y) { return ah * std::sin(x) * (y + 2.0 * y * y) * std::exp(-2.0 * y); };
      break;
    }
  }
  return d;
}

VectorState sample(const InitialData& d, const GridPtr& g) {
  VectorState s;
  s.u = Field::from_function(g, d.u, "u");
  s.v = Field::from_function(g, d.v, "v");
  s.h = Field::from_function(g, d.h, "h");
  s.g = Field::from_function(g, d.g, "g");
  return s;
}

InitCheck validate_initial_data(const VectorState& s, double delta0, const InitTolerances& tol) {
  for (const Field* f : {&s.u, &s.v, &s.h, &s.g}) f->check_finite("validate_initial_data");
  InitCheck c;
  double su = std::max({linf_norm(s.u), linf_norm(s.v), 1e-300});
  double sh = std::max({linf_norm(fluctuation(s.h)), linf_norm(s.g), 1e-300});
  c.div_u = linf_norm(divergence(s.u, s.v, 4)) / su;
  c.div_h = linf_norm(divergence(s.h, s.g, 4)) / sh;
  auto v0 = row_of(s.v, 0), g0 = row_of(s.g, 0), u0 = row_of(s.u, 0), h0 = row_of(s.h, 0);
  for (int i = 0; i < s.u.nx(); ++i) {
    c.wall_v = std::max(c.wall_v, std::abs(v0[i]));
    c.wall_g = std::max(c.wall_g, std::abs(g0[i]));
    c.compat0 = std::max(c.compat0, std::abs(u0[i]));
  }
  c.min_hbar = *std::min_element(h0.begin(), h0.end());
  c.margin = c.min_hbar - delta0;
  std::ostringstream err;
  if (c.div_u > tol.div_rel) err << "velocity divergence " << c.div_u << " > " << tol.div_rel << "; ";
  if (c.div_h > tol.div_rel) err << "magnetic divergence " << c.div_h << " > " << tol.div_rel << "; ";
  if (c.wall_v > tol.wall) err << "wall v " << c.wall_v << " != 0; ";
  if (c.wall_g > tol.wall) err << "wall g " << c.wall_g << " != 0; ";
  if (c.margin < 0.0) err << "min h0(x,0) = " << c.min_hbar << " below delta0 = " << delta0 << " (margin " << c.margin << "); ";
  if (!err.str().empty()) throw std::invalid_argument("validate_initial_data: " + err.str());
  return c;
}

StepPlan plan_steps(double T, double dt_snap, double dt) {
  if (!(T > 0.0) || !(dt_snap > 0.0) || !(dt > 0.0)) throw std::invalid_argument("plan_steps: T, dt_snap, dt must be positive");
  StepPlan p;
  p.snapshots = static_cast<int>(std::lround(T / dt_snap));
  if (p.snapshots < 2 || std::abs(p.snapshots * dt_snap - T) > 1e-9 * T)
    throw std::invalid_argument("plan_steps: T must be a multiple (>= 2) of the snapshot interval");
  p.substeps = static_cast<int>(std::ceil(dt_snap / dt - 1e-9));
  p.dt = dt_snap / p.substeps;
  return p;
}

namespace {

void record(InnerSolution& sol, const StreamSolver& solver, const InnerVars& s, double t) {
  std::vector<double> zero(s.w.nx(), 0.0);
  Field psi = solver.solve(s.w, zero);
  InnerFields f = derive_fields(s, psi, sol.order);
  Flux fl = bilinear_flux(f, f);
  InnerVars ds = flux_tendency(fl, sol.order);
  Field psi_t = solver.solve(ds.w, zero);
  Field p = modified_pressure(fl, psi_t, sol.order) - pressure_shift(f, nullptr);
  sol.energy.push_back(field_energy(f.u, f.v, f.h, f.g));
  sol.cross_helicity.push_back(cross_helicity(f.u, f.v, f.h, f.g));
  sol.traj.push(t, {f.u, f.v, f.h, f.g, p, f.omega, f.j});
}

}  // namespace

InnerSolution solve_ideal_mhd(const VectorState& init, double T, double dt, const InnerOptions& opt) {
  const GridPtr& g = init.u.grid_ptr();
  StepPlan plan = plan_steps(T, opt.dt_snap, dt);
  InnerSolution sol;
  sol.order = opt.order;
  sol.dt = plan.dt;
  sol.traj = Trajectory(g, {"u", "v", "h", "g", "p", "omega", "j"});
  StreamSolver solver(g, opt.order);
  InnerVars s = vars_from_primitive(init, opt.order);
  std::vector<double> zero(g->nx(), 0.0);

  auto rhs = [&](const InnerVars& st, double) {
    InnerFields f = derive_fields(st, solver.solve(st.w, zero), opt.order);
    return flux_tendency(bilinear_flux(f, f), opt.order);
  };
  auto fix = [&](InnerVars& st, double) {
    st.dealias();
    std::fill(st.a.row(0), st.a.row(0) + g->nx(), 0.0);
  };
  fix(s, 0.0);
  record(sol, solver, s, 0.0);
  double t = 0.0;
  for (int k = 1; k <= plan.snapshots; ++k) {
    for (int m = 0; m < plan.substeps; ++m) {
      InnerFields f = derive_fields(s, solver.solve(s.w, zero), opt.order);
      double c = courant(f.u, f.v, plan.dt);
      sol.max_courant = std::max(sol.max_courant, c);
      if (c > opt.cfl_max) {
        std::ostringstream os;
        os << "solve_ideal_mhd: CFL violation at t=" << t << " (Courant " << c << " > " << opt.cfl_max << ")";
        throw std::runtime_error(os.str());
      }
      ssprk3_step(s, t, plan.dt, rhs, fix);
      t = ((k - 1) * plan.substeps + m + 1) * plan.dt;
      s.check_finite("solve_ideal_mhd at t=" + std::to_string(t));
    }
    t = k * opt.dt_snap;
    record(sol, solver, s, t);
  }
  return sol;
}

TraceSeries extract_trace(const Trajectory& traj, int order) {
  const GridPtr& g = traj.grid();
  TraceSeries tr(g->nx());
  for (int k = 0; k < traj.size(); ++k) {
    tr.add_time(traj.times()[k]);
    for (const char* n : {"u", "v", "h", "g"}) {
      const Field& f = traj.at(k, n);
      Field dy = ddy(f, order);
      tr.set(n, k, row_of(f, 0));
      tr.set(std::string("dy_") + n, k, row_of(dy, 0));
      tr.set(std::string("dyy_") + n, k, row_of(ddy(dy, order), 0));
    }
    const Field& p = traj.at(k, "p");
    auto p0 = row_of(p, 0);
    tr.set("p", k, p0);
    tr.set("dx_p", k, dx_line(p0));
    tr.set("dy_p", k, row_of(ddy(p, order), 0));
  }
  return tr;
}

}  // namespace mhdbl
