#include "mhdbl/bl1.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>

#include <spdlog/spdlog.h>

#include "mhdbl/cutoff.hpp"
#include "mhdbl/inner_core.hpp"
#include "mhdbl/ops.hpp"
#include "mhdbl/spectral.hpp"

namespace mhdbl {

namespace {

using detail::ARS222;
using detail::BC;
using detail::ColumnImplicit;

void require_same_times(const Trajectory& tr, const TraceSeries& ts, const char* who, const char* what) {
  bool ok = ts.size() == tr.size();
  for (int k = 0; ok && k < tr.size(); ++k) ok = std::abs(ts.times()[k] - tr.times()[k]) <= 1e-12 * std::max(1.0, tr.times().back());
  if (!ok) throw std::invalid_argument(std::string(who) + ": " + what + " times differ from the profile snapshots");
}

/// f(x) + eta * d(x), broadcast over the grid.
Field affine(const GridPtr& g, const std::vector<double>& f, const std::vector<double>& d, double pow_div = 1.0,
             int power = 1) {
  Field out(g);
  for (int j = 0; j < g->ny(); ++j) {
    double e = std::pow(g->y(j), power) / pow_div;
    for (int i = 0; i < g->nx(); ++i) out(i, j) = f[i] + e * d[i];
  }
  return out;
}

std::vector<double> zeros(int n) { return std::vector<double>(n, 0.0); }

/// Wall-parallel line repeated on every eta-row.
Field rows(const GridPtr& g, const std::vector<double>& line) { return affine(g, line, zeros(g->nx())); }

// Coefficients of the first-order layer equations at one snapshot:
//   u_t + A u_x + W u_eta - B h_x - Z h_eta + Cu u + Eu v - Ch h - Eh g - mu u_ee = SU
//   h_t + A h_x + W h_eta - B u_x - Z u_eta + Ch u + Eh v - Cu h - Eu g - ka h_ee = SH
const std::vector<std::string> kCoef = {"A", "B", "W", "Z", "Cu", "Ch", "Eu", "Eh", "SU", "SH"};

std::vector<Field> coefficients(const BLProfile0& prof, const TraceSeries& t0, const TraceSeries& t1, int k, int order) {
  const GridPtr& g = prof.traj.grid();
  const int nx = g->nx();
  const Field &ub = prof.traj.at(k, "ub0"), &vb = prof.traj.at(k, "vb0"), &hb = prof.traj.at(k, "hb0"),
              &gb = prof.traj.at(k, "gb0");
  auto L = [&](const TraceSeries& t, const char* c) { return t.at(c, k); };
  auto u0 = L(t0, "u"), h0 = L(t0, "h"), dyu0 = L(t0, "dy_u"), dyv0 = L(t0, "dy_v"), dyh0 = L(t0, "dy_h"),
       dyg0 = L(t0, "dy_g"), dyyv0 = L(t0, "dyy_v"), dyyg0 = L(t0, "dyy_g");
  auto u1 = L(t1, "u"), v1 = L(t1, "v"), h1 = L(t1, "h"), g1 = L(t1, "g"), dyv1 = L(t1, "dy_v"), dyg1 = L(t1, "dy_g");
  auto z = zeros(nx);
  Field ubx = ddx(ub), hbx = ddx(hb), ube = ddy(ub, order), hbe = ddy(hb, order);
  Field A = ub + rows(g, u0), B = hb + rows(g, h0);
  Field W = vb + affine(g, v1, dyv0), Z = gb + affine(g, g1, dyg0);
  Field Cu = ubx + rows(g, dx_line(u0)), Ch = hbx + rows(g, dx_line(h0));
  // Sources.
  Field a1 = affine(g, u1, dyu0), b1 = affine(g, h1, dyh0);
  Field cv = affine(g, z, dyv1) + affine(g, z, dyyv0, 2.0, 2), cg = affine(g, z, dyg1) + affine(g, z, dyyg0, 2.0, 2);
  Field du = affine(g, dx_line(u1), dx_line(dyu0)), dh = affine(g, dx_line(h1), dx_line(dyh0));
  Field dyu = rows(g, dyu0), dyh = rows(g, dyh0);
  Field SU = -1.0 * (a1 * ubx) - cv * ube + b1 * hbx + cg * hbe - du * ub - dyu * vb + dh * hb + dyh * gb;
  Field SH = -1.0 * (a1 * hbx) - cv * hbe + b1 * ubx + cg * ube - dh * ub - dyh * vb + du * hb + dyu * gb;
  return {A, B, W, Z, Cu, Ch, ube, hbe, SU, SH};
}

struct Tend {
  Field u, h;
};

class BL1Stepper {
 public:
  BL1Stepper(const Trajectory& coef, const TraceSeries& t0, const TraceSeries& t1, const BLOptions& opt)
      : coef_(coef), t0_(t0), t1_(t1), g_(coef.grid()), opt_(opt) {}

  Tend explicit_part(const Field& u, const Field& h, double t, double* courant) const {
    const int nx = g_->nx(), N = g_->ny() - 1;
    const double de = g_->y(1) - g_->y(0), dx = g_->dx();
    std::vector<Field> c;
    for (std::size_t q = 0; q < kCoef.size(); ++q) c.push_back(coef_.interp(kCoef[q], t));
    const Field &A = c[0], &B = c[1], &W = c[2], &Z = c[3], &Cu = c[4], &Ch = c[5], &Eu = c[6], &Eh = c[7],
                &SU = c[8], &SH = c[9];
    Field ux = ddx(u), hx = ddx(h);
    Field v = -1.0 * cumulative_integral(ux), gm = -1.0 * cumulative_integral(hx);
    Field zp = u + h, zm = u - h;
    Tend r{Field(g_, "Nu1"), Field(g_, "Nh1")};
    double cmax = 0.0;
    for (int j = 1; j < N; ++j)
      for (int i = 0; i < nx; ++i) {
        double cp = W(i, j) - Z(i, j), cm = W(i, j) + Z(i, j);
        double ap = cp * detail::upwind_eta(zp.data() + i, nx, j, N, cp, de);
        double am = cm * detail::upwind_eta(zm.data() + i, nx, j, N, cm, de);
        r.u(i, j) = -A(i, j) * ux(i, j) + B(i, j) * hx(i, j) - 0.5 * (ap + am) - Cu(i, j) * u(i, j) -
                    Eu(i, j) * v(i, j) + Ch(i, j) * h(i, j) + Eh(i, j) * gm(i, j) + SU(i, j);
        r.h(i, j) = -A(i, j) * hx(i, j) + B(i, j) * ux(i, j) - 0.5 * (ap - am) - Ch(i, j) * u(i, j) -
                    Eh(i, j) * v(i, j) + Cu(i, j) * h(i, j) + Eu(i, j) * gm(i, j) + SH(i, j);
        double ca = std::max(std::abs(A(i, j) - B(i, j)), std::abs(A(i, j) + B(i, j)));
        cmax = std::max(cmax, std::max(std::abs(cp), std::abs(cm)) / de + ca / dx);
      }
    spectral::dealias(r.u.data(), nx, g_->ny());
    spectral::dealias(r.h.data(), nx, g_->ny());
    if (courant) *courant = cmax;
    return r;
  }

  const ColumnImplicit& solver(double dt, bool velocity_eq) {
    auto key = std::make_pair(dt, velocity_eq);
    auto it = cache_.find(key);
    if (it != cache_.end()) return *it->second;
    double c = ARS222().gamma * dt * (velocity_eq ? opt_.mu : opt_.kappa);
    auto s = std::make_unique<ColumnImplicit>(g_, c, velocity_eq ? BC::Dirichlet : BC::Neumann, BC::Neumann,
                                              opt_.order);
    return *cache_.emplace(key, std::move(s)).first->second;
  }

  void implicit_solve(Field& u, Field& h, double t, double dt) {
    std::vector<double> uw = t1_.interp("u", t), hw = t0_.interp("dy_h", t), zero(g_->nx(), 0.0);
    for (auto& x : uw) x = -x;
    for (auto& x : hw) x = -x;
    solver(dt, true).solve(u, uw, zero);
    solver(dt, false).solve(h, hw, zero);
  }

  double step(Field& u, Field& h, double t, double dt) {
    const ARS222 ars;
    const double gm = ars.gamma, dl = ars.delta;
    double c1 = 0.0;
    Tend n1 = explicit_part(u, h, t, &c1);
    double t2 = t + gm * dt, t3 = t + dt;
    Field u2 = u, h2 = h;
    u2.axpy(gm * dt, n1.u);
    h2.axpy(gm * dt, n1.h);
    implicit_solve(u2, h2, t2, dt);
    Field lu2 = u2 - u, lh2 = h2 - h;
    lu2.axpy(-gm * dt, n1.u);
    lh2.axpy(-gm * dt, n1.h);
    lu2 *= 1.0 / (gm * dt);
    lh2 *= 1.0 / (gm * dt);
    Tend n2 = explicit_part(u2, h2, t2, nullptr);
    Field u3 = u, h3 = h;
    u3.axpy(dl * dt, n1.u).axpy((1.0 - dl) * dt, n2.u).axpy((1.0 - gm) * dt, lu2);
    h3.axpy(dl * dt, n1.h).axpy((1.0 - dl) * dt, n2.h).axpy((1.0 - gm) * dt, lh2);
    implicit_solve(u3, h3, t3, dt);
    u = std::move(u3);
    h = std::move(h3);
    return c1 * dt;
  }

 private:
  const Trajectory& coef_;
  const TraceSeries &t0_, &t1_;
  GridPtr g_;
  BLOptions opt_;
  std::map<std::pair<double, bool>, std::unique_ptr<ColumnImplicit>> cache_;
};

}  // namespace

PressureBL pressure_corrector(const BLProfile0& prof, const TraceSeries& trace0, const TraceSeries& trace1, double mu,
                              int order) {
  trace0.require({"u", "h", "dy_v", "dy_g"}, "pressure_corrector (inner0 trace)");
  trace1.require({"v", "g"}, "pressure_corrector (inner1 trace)");
  const Trajectory& tr = prof.traj;
  require_same_times(tr, trace0, "pressure_corrector", "inner0 trace");
  require_same_times(tr, trace1, "pressure_corrector", "inner1 trace");
  const GridPtr& g = tr.grid();
  PressureBL out;
  out.traj = Trajectory(g, {"pb1", "dpb1"});
  for (int k = 0; k < tr.size(); ++k) {
    const Field &ub = tr.at(k, "ub0"), &vb = tr.at(k, "vb0"), &hb = tr.at(k, "hb0"), &gb = tr.at(k, "gb0");
    Field vt = tr.size() >= 3 ? tr.ddt(k, "vb0") : Field(g);
    Field vx = ddx(vb), gx = ddx(gb), ve = ddy(vb, order), ge = ddy(gb, order), vee = d2y(vb, order);
    auto u0 = trace0.at("u", k), h0 = trace0.at("h", k), dyv0 = trace0.at("dy_v", k), dyg0 = trace0.at("dy_g", k);
    auto v1 = trace1.at("v", k), g1 = trace1.at("g", k);
    Field U = ub + rows(g, u0), H = hb + rows(g, h0);
    Field cv = affine(g, dx_line(v1), dx_line(dyv0)), cg = affine(g, dx_line(g1), dx_line(dyg0));
    Field Wv = affine(g, v1, dyv0), Wg = affine(g, g1, dyg0);
    Field integrand = vt + U * vx - H * gx + cv * ub - cg * hb;
    integrand.set_label("LP integrand");
    Field p = tail_integral(integrand, 1e-6);
    Field bracket = -1.0 * ((0.5 * vb + Wv) * vb) + (0.5 * gb + Wg) * gb + mu * ve;
    p += bracket;
    Field dp = -1.0 * integrand - (vb + Wv) * ve + (gb + Wg) * ge + mu * vee - rows(g, dyv0) * vb +
               rows(g, dyg0) * gb;
    p.set_label("pb1");
    dp.set_label("dpb1");
    out.traj.push(tr.times()[k], {p, dp});
  }
  return out;
}

BLProfile1 solve_bl1(const BLProfile0& prof, const TraceSeries& trace0, const TraceSeries& trace1, double dt,
                     const BLOptions& opt) {
  trace0.require({"u", "v", "h", "g", "dy_u", "dy_v", "dy_h", "dy_g", "dyy_v", "dyy_g"}, "solve_bl1 (inner0 trace)");
  trace1.require({"u", "v", "h", "g", "dy_v", "dy_g"}, "solve_bl1 (inner1 trace)");
  const Trajectory& tr = prof.traj;
  require_same_times(tr, trace0, "solve_bl1", "inner0 trace");
  require_same_times(tr, trace1, "solve_bl1", "inner1 trace");
  if (tr.size() < 3) throw std::invalid_argument("solve_bl1: need at least 3 snapshots");
  const GridPtr& g = tr.grid();
  const int N = g->ny() - 1;

  Trajectory coef(g, kCoef);
  for (int k = 0; k < tr.size(); ++k) {
    auto c = coefficients(prof, trace0, trace1, k, opt.order);
    for (const Field& f : c) f.check_finite("solve_bl1 coefficients");
    coef.push(tr.times()[k], std::move(c));
  }
  BL1Stepper st(coef, trace0, trace1, opt);
  Field u(g, "ub1"), h(g, "hb1");
  BLProfile1 out;
  out.traj = Trajectory(g, {"ub1", "vb1", "hb1", "gb1"});
  auto push = [&](double t) {
    Field v = -1.0 * cumulative_integral(ddx(u)), gg = -1.0 * cumulative_integral(ddx(h));
    for (int i = 0; i < g->nx(); ++i) out.far_field = std::max(out.far_field, std::abs(u(i, N)));
    out.traj.push(t, {u, v, h, gg});
  };
  push(tr.times()[0]);
  int taken = 0;
  for (int k = 1; k < tr.size(); ++k) {
    double t0 = tr.times()[k - 1], span = tr.times()[k] - t0;
    int m = static_cast<int>(std::ceil(span / dt - 1e-9));
    double hs = span / m;
    out.dt = std::max(out.dt, hs);
    for (int s = 0; s < m; ++s) {
      int sub = taken++ < opt.corner_steps ? opt.corner_substeps : 1;
      for (int q = 0; q < sub; ++q) {
        double c = st.step(u, h, t0 + s * hs + q * hs / sub, hs / sub);
        out.max_courant = std::max(out.max_courant, c);
        if (c > opt.cfl_max) {
          std::ostringstream os;
          os << "solve_bl1: CFL violation at t=" << t0 + s * hs << " (Courant " << c << " > " << opt.cfl_max << ")";
          throw std::runtime_error(os.str());
        }
      }
      u.check_finite("solve_bl1 at t=" + std::to_string(t0 + (s + 1) * hs));
      h.check_finite("solve_bl1 at t=" + std::to_string(t0 + (s + 1) * hs));
    }
    push(tr.times()[k]);
  }
  if (out.far_field > 1e-4)
    spdlog::warn("solve_bl1: |ub1| reaches {:.3e} at eta={} (far-field alarm 1e-4); consider a longer layer domain",
                 out.far_field, g->L());
  return out;
}

RhoCorrector boundary_corrector_rho(const TraceSeries& trace1, const GridPtr& g) {
  trace1.require({"dy_h"}, "boundary_corrector_rho");
  if (trace1.nx() != g->nx()) throw std::invalid_argument("boundary_corrector_rho: trace and grid nx differ");
  const int nx = g->nx(), ny = g->ny();
  std::vector<double> m1(ny), ec(ny);
  for (int j = 0; j < ny; ++j) {
    m1[j] = chi_moment1(g->y(j));
    ec[j] = g->y(j) * chi(g->y(j));
  }
  RhoCorrector out;
  out.traj = Trajectory(g, {"rho", "Rh", "dxRh"});
  for (int k = 0; k < trace1.size(); ++k) {
    auto d = trace1.at("dy_h", k);
    auto dd = dx_line(d);
    Field rho(g, "rho"), R(g, "Rh"), dR(g, "dxRh");
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        rho(i, j) = -d[i] * ec[j];
        R(i, j) = -d[i] * m1[j];
        dR(i, j) = -dd[i] * m1[j];
      }
    out.traj.push(trace1.times()[k], {rho, R, dR});
  }
  return out;
}

Profile1Residual check_profile1_consistency(const BLProfile1& p1, const BLProfile0& prof, const TraceSeries& trace0,
                                            const TraceSeries& trace1, const BLOptions& opt, double t_min) {
  const Trajectory& tr = p1.traj;
  const GridPtr& g = tr.grid();
  const int nx = g->nx(), ny = g->ny();
  double ru = 0.0, rh = 0.0, su = 0.0, sh = 0.0;
  for (int k = 1; k + 1 < tr.size(); ++k) {
    if (tr.times()[k] < t_min) continue;
    auto c = coefficients(prof, trace0, trace1, k, opt.order);
    const Field &u = tr.at(k, "ub1"), &v = tr.at(k, "vb1"), &h = tr.at(k, "hb1"), &gg = tr.at(k, "gb1");
    Field ut = tr.ddt(k, "ub1"), ht = tr.ddt(k, "hb1");
    Field ux = ddx(u), hx = ddx(h), ue = ddy(u, opt.order), he = ddy(h, opt.order);
    Field uee = d2y(u, opt.order), hee = d2y(h, opt.order);
    for (int j = 1; j + 1 < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        auto C = [&](int q) { return c[q](i, j); };
        double tu[] = {ut(i, j),          C(0) * ux(i, j),    C(2) * ue(i, j),    -C(1) * hx(i, j),
                       -C(3) * he(i, j),  C(4) * u(i, j),     C(6) * v(i, j),     -C(5) * h(i, j),
                       -C(7) * gg(i, j),  -opt.mu * uee(i, j), -C(8)};
        double th[] = {ht(i, j),          C(0) * hx(i, j),    C(2) * he(i, j),    -C(1) * ux(i, j),
                       -C(3) * ue(i, j),  C(5) * u(i, j),     C(7) * v(i, j),     -C(4) * h(i, j),
                       -C(6) * gg(i, j),  -opt.kappa * hee(i, j), -C(9)};
        auto acc = [](const double* a, int n, double& res, double& sc) {
          double s = 0.0;
          for (int q = 0; q < n; ++q) {
            s += a[q];
            sc = std::max(sc, std::abs(a[q]));
          }
          res = std::max(res, std::abs(s));
        };
        acc(tu, 11, ru, su);
        acc(th, 11, rh, sh);
      }
  }
  return {ru / std::max(su, 1e-300), rh / std::max(sh, 1e-300)};
}

}  // namespace mhdbl
