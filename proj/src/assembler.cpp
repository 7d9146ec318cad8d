#include "mhdbl/assembler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "composite.hpp"
#include "mhdbl/inner_core.hpp"
#include "mhdbl/ops.hpp"

namespace mhdbl {

using detail::Atoms;
using detail::J;
using detail::Pt;

namespace {

void same_times(const std::vector<double>& a, const std::vector<double>& b, const std::string& what) {
  if (a.size() != b.size()) throw std::invalid_argument("check_constituents: " + what + " has a different snapshot count");
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(a[k] - b[k]) > 1e-9 * std::max(1.0, std::abs(a[k]))) {
      std::ostringstream os;
      os << "check_constituents: " << what << " snapshot " << k << " at t=" << b[k] << ", inner0 at t=" << a[k];
      throw std::invalid_argument(os.str());
    }
}

std::vector<double> scaled(const GridPtr& g, double s) {
  std::vector<double> q(g->ny());
  for (int j = 0; j < g->ny(); ++j) q[j] = g->y(j) / s;
  return q;
}

J pick(const Jet& f, int i, int j) { return {f.v(i, j), f.t(i, j), f.x(i, j), f.y(i, j), f.xx(i, j), f.xy(i, j), f.yy(i, j)}; }

/// Overwrite the eta-slots of f with those implied by d_eta f = c * (d_x or value of) src.
void set_eta_from_dx(Jet& f, const Jet& src, double c) {
  f.y = c * src.x;
  f.xy = c * src.xx;
  f.yy = c * src.xy;
}
void set_eta_from_value(Jet& f, const Jet& src) {
  f.y = src.v;
  f.xy = src.x;
  f.yy = src.y;
}

}  // namespace

void check_constituents(const Constituents& c) {
  const auto& t = c.inner0.traj.times();
  if (t.size() < 5) throw std::invalid_argument("check_constituents: need at least 5 snapshots");
  same_times(t, c.inner1.traj.times(), "inner1");
  same_times(t, c.trace0.times(), "trace0");
  same_times(t, c.trace1.times(), "trace1");
  same_times(t, c.profile0.traj.times(), "profile0");
  same_times(t, c.profile1.traj.times(), "profile1");
  same_times(t, c.pressure.traj.times(), "pressure layer");
  if (!c.inner0.traj.grid()->same_shape(*c.inner1.traj.grid()))
    throw std::invalid_argument("check_constituents: inner0 and inner1 grids differ");
  const Grid& bl = *c.profile0.traj.grid();
  if (!bl.same_shape(*c.profile1.traj.grid()) || !bl.same_shape(*c.pressure.traj.grid()))
    throw std::invalid_argument("check_constituents: layer grids differ");
  if (bl.nx() != c.inner0.traj.grid()->nx()) throw std::invalid_argument("check_constituents: layer and inner nx differ");
}

namespace detail {

Atoms::Atoms(const GridPtr& g, int) : grid(g) {}

Pt Atoms::at(int i, int j) const {
  Pt p;
  p.s = s;
  p.y = grid->y(j);
  p.eta = eta[j];
  p.chi = chi_y[j];
  p.u0 = pick(u0, i, j);
  p.v0 = pick(v0, i, j);
  p.h0 = pick(h0, i, j);
  p.g0 = pick(g0, i, j);
  p.p0 = pick(p0, i, j);
  p.u1 = pick(u1, i, j);
  p.v1 = pick(v1, i, j);
  p.h1 = pick(h1, i, j);
  p.g1 = pick(g1, i, j);
  p.p1 = pick(p1, i, j);
  p.ub0 = pick(ub0, i, j);
  p.vb0 = pick(vb0, i, j);
  p.hb0 = pick(hb0, i, j);
  p.gb0 = pick(gb0, i, j);
  p.ub1 = pick(ub1, i, j);
  p.vb1 = pick(vb1, i, j);
  p.hb1 = pick(hb1, i, j);
  p.gb1 = pick(gb1, i, j);
  p.Ub1 = pick(Ub1, i, j);
  p.Hb1 = pick(Hb1, i, j);
  p.P = pick(P, i, j);

  // rho = -c eta chi(eta); Rx = d_x of its integral from the wall.
  const ChiJet& ce = chi_eta[j];
  const double e = eta[j], q0 = e * ce.v, q1 = ce.v + e * ce.d1, q2 = 2.0 * ce.d1 + e * ce.d2, m = m1[j];
  p.rho = {-c[i] * q0, -ct[i] * q0, -cx[i] * q0, -c[i] * q1, -cxx[i] * q0, -cx[i] * q1, -c[i] * q2};
  p.Rx = {-cx[i] * m, -cxt[i] * m, -cxx[i] * m, -cx[i] * q0, -cxxx[i] * m, -cxx[i] * q0, -cx[i] * q1};

  p.U0 = tu0.v[i];
  p.dyu0 = tu0.y[i];
  p.dxu0 = tu0.x[i];
  p.dxxu0 = tu0.xx[i];
  p.dxyu0 = tu0.xy[i];
  p.dyv0 = tv0.y[i];
  p.dyyv0 = tv0.yy[i];
  p.dxyv0 = tv0.xy[i];
  p.H0 = th0.v[i];
  p.dyh0 = th0.y[i];
  p.dxh0 = th0.x[i];
  p.dxxh0 = th0.xx[i];
  p.dxyh0 = th0.xy[i];
  p.dyg0 = tg0.y[i];
  p.dyyg0 = tg0.yy[i];
  p.dxyg0 = tg0.xy[i];
  p.U1 = tu1.v[i];
  p.dxu1 = tu1.x[i];
  p.V1 = tv1.v[i];
  p.dyv1 = tv1.y[i];
  p.dxv1 = tv1.x[i];
  p.H1 = th1.v[i];
  p.dxh1 = th1.x[i];
  p.G1 = tg1.v[i];
  p.dyg1 = tg1.y[i];
  p.dxg1 = tg1.x[i];
  p.V0b = V0b[i];
  p.G0b = G0b[i];
  p.dxV0b = dxV0b[i];
  p.dxG0b = dxG0b[i];
  return p;
}

}  // namespace detail

GridPtr assembly_grid(double eps, int nx, int ny, double Ly, double points_per_layer) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("assembly_grid: eps must lie in (0, 1]");
  return make_clustered_grid(nx, ny, Ly, std::sqrt(eps) / points_per_layer);
}

ApproxSolution::ApproxSolution(double eps, std::shared_ptr<const Constituents> parts, GridPtr grid)
    : eps_(eps),
      parts_(std::move(parts)),
      grid_(std::move(grid)),
      inner_ci_(parts_->inner0.traj.grid()->y(), grid_->y()),
      layer_ci_(parts_->profile0.traj.grid()->y(), scaled(grid_, std::sqrt(eps))) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("assemble: eps must lie in (0, 1]");
  check_constituents(*parts_);
  const Grid& ig = *parts_->inner0.traj.grid();
  if (grid_->nx() != ig.nx()) throw std::invalid_argument("assemble: assembly grid nx differs from the inner grid");
  if (grid_->L() > ig.L() * (1.0 + 1e-12)) throw std::invalid_argument("assemble: assembly grid extends beyond the inner grid");
  const Trajectory& p1 = parts_->profile1.traj;
  integrals_ = Trajectory(p1.grid(), {"Ub1", "Hb1"});
  for (int k = 0; k < p1.size(); ++k)
    integrals_.push(p1.times()[k], {cumulative_integral(p1.at(k, "ub1")), cumulative_integral(p1.at(k, "hb1"))});
  double reach = parts_->profile0.traj.grid()->L() * std::sqrt(eps);
  if (reach < grid_->L())
    spdlog::debug("assemble: eps={} layer fields take their tail value for y > {:.4f}", eps, reach);
}

detail::Atoms ApproxSolution::atoms(int k) const {
  if (k < 0 || k >= size()) throw std::out_of_range("ApproxSolution: snapshot index out of range");
  const Constituents& c = *parts_;
  const int o = c.order;
  Atoms A(grid_, grid_->nx());
  A.s = std::sqrt(eps_);

  auto inner = [&](const Trajectory& tr, const char* n, Jet& dst, JetTrace* wall) {
    Jet j = make_jet(tr, n, k, o);
    if (wall) *wall = wall_trace(j);
    dst = resample(j, inner_ci_, grid_, true);
  };
  inner(c.inner0.traj, "u", A.u0, &A.tu0);
  inner(c.inner0.traj, "v", A.v0, &A.tv0);
  inner(c.inner0.traj, "h", A.h0, &A.th0);
  inner(c.inner0.traj, "g", A.g0, &A.tg0);
  inner(c.inner0.traj, "p", A.p0, nullptr);
  inner(c.inner1.traj, "u", A.u1, &A.tu1);
  inner(c.inner1.traj, "v", A.v1, &A.tv1);
  inner(c.inner1.traj, "h", A.h1, &A.th1);
  inner(c.inner1.traj, "g", A.g1, &A.tg1);
  inner(c.inner1.traj, "p", A.p1, nullptr);

  Field h1t = c.inner1.traj.ddt(k, "h");
  A.c = A.th1.y;
  A.ct = row_of(ddy(h1t, o), 0);
  A.cx = A.th1.xy;
  A.cxx = dx_line(A.cx);
  A.cxxx = dx_line(A.cxx);
  A.cxt = dx_line(A.ct);

  const Trajectory &p0 = c.profile0.traj, &p1 = c.profile1.traj;
  Jet vb0 = make_jet(p0, "vb0", k, o), gb0 = make_jet(p0, "gb0", k, o);
  A.V0b = row_of(vb0.v, 0);
  A.G0b = row_of(gb0.v, 0);
  A.dxV0b = row_of(vb0.x, 0);
  A.dxG0b = row_of(gb0.x, 0);
  Jet Ub1 = make_jet(integrals_, "Ub1", k, o), Hb1 = make_jet(integrals_, "Hb1", k, o);
  Jet vb1 = jet_scale(jet_dx(Ub1), -1.0), gb1 = jet_scale(jet_dx(Hb1), -1.0);

  auto layer = [&](const Jet& j, bool hold) { return resample(j, layer_ci_, grid_, hold); };
  A.ub0 = layer(make_jet(p0, "ub0", k, o), false);
  A.hb0 = layer(make_jet(p0, "hb0", k, o), false);
  A.vb0 = layer(vb0, false);
  A.gb0 = layer(gb0, false);
  A.ub1 = layer(make_jet(p1, "ub1", k, o), false);
  A.hb1 = layer(make_jet(p1, "hb1", k, o), false);
  A.Ub1 = layer(Ub1, true);
  A.Hb1 = layer(Hb1, true);
  A.vb1 = layer(vb1, true);
  A.gb1 = layer(gb1, true);
  A.P = layer(make_jet(c.pressure.traj, "pb1", k, o), false);

  // eta-derivatives fixed by the divergence relations and by the wall integrals
  set_eta_from_dx(A.vb0, A.ub0, -1.0);
  set_eta_from_dx(A.gb0, A.hb0, -1.0);
  set_eta_from_dx(A.vb1, A.ub1, -1.0);
  set_eta_from_dx(A.gb1, A.hb1, -1.0);
  set_eta_from_value(A.Ub1, A.ub1);
  set_eta_from_value(A.Hb1, A.hb1);

  const int ny = grid_->ny();
  A.eta.resize(ny);
  A.chi_y.resize(ny);
  A.chi_eta.resize(ny);
  A.m1.resize(ny);
  for (int j = 0; j < ny; ++j) {
    A.eta[j] = grid_->y(j) / A.s;
    A.chi_y[j] = chi_jet(grid_->y(j));
    A.chi_eta[j] = chi_jet(A.eta[j]);
    A.m1[j] = chi_moment1(A.eta[j]);
  }
  return A;
}

VectorState ApproxSolution::fields(int k) const {
  Atoms A = atoms(k);
  VectorState s{Field(grid_, "ua"), Field(grid_, "va"), Field(grid_, "ha"), Field(grid_, "ga"), Field(grid_, "pa")};
  for (int j = 0; j < grid_->ny(); ++j)
    for (int i = 0; i < grid_->nx(); ++i) {
      detail::Composite a = detail::compose(A.at(i, j));
      s.u(i, j) = a.u.v;
      s.v(i, j) = a.v.v;
      s.h(i, j) = a.h.v;
      s.g(i, j) = a.g.v;
      (*s.p)(i, j) = a.p;
    }
  return s;
}

VectorState ApproxSolution::leading_order(int k) const {
  const Constituents& c = *parts_;
  const double s = std::sqrt(eps_);
  auto in = [&](const char* n) { return inner_ci_.apply(c.inner0.traj.at(k, n), grid_, true); };
  auto lay = [&](const char* n) { return layer_ci_.apply(c.profile0.traj.at(k, n), grid_, false); };
  VectorState out{in("u") + lay("ub0"), in("v") + s * lay("vb0"), in("h") + lay("hb0"), in("g") + s * lay("gb0"), {}};
  out.u.set_label("u");
  out.v.set_label("v");
  out.h.set_label("h");
  out.g.set_label("g");
  return out;
}

ApproxSolution::Auxiliary ApproxSolution::auxiliary(int k) const {
  Atoms A = atoms(k);
  Auxiliary x{Field(grid_, "tau_u"), Field(grid_, "tau_h"), Field(grid_, "tau_g"), Field(grid_, "ub1~"),
              Field(grid_, "vb1~"), Field(grid_, "hb1~"), Field(grid_, "gb1~")};
  for (int j = 0; j < grid_->ny(); ++j)
    for (int i = 0; i < grid_->nx(); ++i) {
      detail::Composite a = detail::compose(A.at(i, j));
      x.tau_u(i, j) = a.tau_u.v;
      x.tau_h(i, j) = a.tau_h.v;
      x.tau_g(i, j) = a.tau_g.v;
      x.ub1(i, j) = a.tub1.v;
      x.vb1(i, j) = a.tvb1.v;
      x.hb1(i, j) = a.thb1.v;
      x.gb1(i, j) = a.tgb1.v;
    }
  return x;
}

StructureCheck check_structure(const ApproxSolution& a, int k) {
  Atoms A = a.atoms(k);
  const GridPtr& g = a.grid();
  StructureCheck r;
  for (int j = 0; j < g->ny(); ++j)
    for (int i = 0; i < g->nx(); ++i) {
      detail::Composite c = detail::compose(A.at(i, j));
      if (j == 0) {
        r.wall_u = std::max(r.wall_u, std::abs(c.u.v));
        r.wall_v = std::max(r.wall_v, std::abs(c.v.v));
        r.wall_dyh = std::max(r.wall_dyh, std::abs(c.h.y));
        r.wall_g = std::max(r.wall_g, std::abs(c.g.v));
      }
      r.div_u = std::max(r.div_u, std::abs(c.u.x + c.v.y));
      r.div_h = std::max(r.div_h, std::abs(c.h.x + c.g.y));
      r.div_scale = std::max({r.div_scale, std::abs(c.u.x), std::abs(c.h.x)});
    }
  VectorState f = a.fields(k);
  r.div_u_fd = linf_norm(divergence(f.u, f.v, 4));
  r.div_h_fd = linf_norm(divergence(f.h, f.g, 4));
  return r;
}

double initial_defect(const ApproxSolution& a) {
  VectorState f = a.fields(0);
  const Constituents& c = a.parts();
  ColumnInterp ci(c.inner0.traj.grid()->y(), a.grid()->y());
  double d = 0.0;
  for (const char* n : {"u", "v", "h", "g"}) {
    Field ref = ci.apply(c.inner0.traj.at(0, n), a.grid(), true);
    const Field& got = n[0] == 'u' ? f.u : n[0] == 'v' ? f.v : n[0] == 'h' ? f.h : f.g;
    d = std::max(d, linf_norm(got - ref));
  }
  return d;
}

}  // namespace mhdbl
