#include "mhdbl/bl0.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <sstream>

#include "mhdbl/fd.hpp"
#include "mhdbl/inner0.hpp"
#include "mhdbl/inner_core.hpp"
#include "mhdbl/ops.hpp"
#include "mhdbl/spectral.hpp"

namespace mhdbl {

namespace detail {

double upwind_eta(const double* z, int stride, int j, int N, double c, double d) {
  auto at = [&](int q) { return z[static_cast<std::ptrdiff_t>(q) * stride]; };
  if (c >= 0.0) {
    if (j >= 2) return (3.0 * at(j) - 4.0 * at(j - 1) + at(j - 2)) / (2.0 * d);
    return (at(j) - at(j - 1)) / d;
  }
  if (j <= N - 2) return (-3.0 * at(j) + 4.0 * at(j + 1) - at(j + 2)) / (2.0 * d);
  return (at(j + 1) - at(j)) / d;
}

ARS222::ARS222() : gamma(1.0 - 1.0 / std::sqrt(2.0)), delta(1.0 - 1.0 / (2.0 * (1.0 - 1.0 / std::sqrt(2.0)))) {}

ColumnImplicit::ColumnImplicit(const GridPtr& g, double c, BC wall, BC top, int order) : g_(g) {
  const int ny = g->ny(), N = ny - 1;
  const YOperator& D1 = g->op(1, order);
  m_ = BandMatrix(ny, 4, 4);
  auto neumann_row = [&](int j) {
    const double* w = D1.w(j);
    for (int q = 0; q < D1.count(j); ++q) m_.add(j, D1.start(j) + q, w[q]);
  };
  if (wall == BC::Dirichlet) m_.at(0, 0) = 1.0;
  else neumann_row(0);
  if (top == BC::Dirichlet) m_.at(N, N) = 1.0;
  else neumann_row(N);
  for (int j = 1; j < N; ++j) {
    double dm = g->y(j) - g->y(j - 1), dp = g->y(j + 1) - g->y(j), s = 2.0 / (dm + dp);
    m_.add(j, j - 1, -c * s / dm);
    m_.add(j, j, 1.0 + c * s * (1.0 / dm + 1.0 / dp));
    m_.add(j, j + 1, -c * s / dp);
  }
  m_.factor();
}

void ColumnImplicit::solve(Field& f, const std::vector<double>& wall, const std::vector<double>& top) const {
  const int nx = g_->nx(), ny = g_->ny(), N = ny - 1;
  std::vector<double> b(static_cast<std::size_t>(nx) * ny);
  for (int i = 0; i < nx; ++i) {
    double* col = &b[static_cast<std::size_t>(i) * ny];
    for (int j = 1; j < N; ++j) col[j] = f(i, j);
    col[0] = wall[i];
    col[N] = top[i];
  }
  m_.solve(b.data(), nx);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) f(i, j) = b[static_cast<std::size_t>(i) * ny + j];
}

Field second_diff(const Field& f) {
  const Grid& g = f.grid();
  const int nx = g.nx(), N = g.ny() - 1;
  Field out(f.grid_ptr(), "L " + f.label());
  for (int j = 1; j < N; ++j) {
    double dm = g.y(j) - g.y(j - 1), dp = g.y(j + 1) - g.y(j), s = 2.0 / (dm + dp);
    for (int i = 0; i < nx; ++i)
      out(i, j) = s * ((f(i, j + 1) - f(i, j)) / dp - (f(i, j) - f(i, j - 1)) / dm);
  }
  return out;
}

}  // namespace detail

namespace {

using detail::ARS222;
using detail::BC;
using detail::ColumnImplicit;

struct Tend {
  Field u, h;
};

class BL0Stepper {
 public:
  BL0Stepper(const TraceSeries& tr, const GridPtr& g, const BLOptions& opt) : tr_(tr), g_(g), opt_(opt) {}

  Field velocity(const Field& ux) const {
    Field v = cumulative_integral(ux);
    v *= -1.0;
    return v;
  }

  // Explicit part: x-transport, Lorentz terms, pressure gradient and upwinded
  // eta-transport in Elsasser variables.
  Tend explicit_part(const Field& u, const Field& h, double t, double* courant) const {
    const int nx = g_->nx(), N = g_->ny() - 1;
    const double de = g_->y(1) - g_->y(0), dx = g_->dx();
    auto dpdx = tr_.interp("dx_p", t);
    Field ux = ddx(u), hx = ddx(h);
    Field v = velocity(ux), gm = velocity(hx);
    Field zp = u + h, zm = u - h;
    Tend r{Field(g_, "Nu"), Field(g_, "Nh")};
    double cmax = 0.0;
    for (int j = 1; j < N; ++j)
      for (int i = 0; i < nx; ++i) {
        double cp = v(i, j) - gm(i, j), cm = v(i, j) + gm(i, j);
        double dzp = detail::upwind_eta(zp.data() + i, nx, j, N, cp, de);
        double dzm = detail::upwind_eta(zm.data() + i, nx, j, N, cm, de);
        double ap = cp * dzp, am = cm * dzm;
        r.u(i, j) = -u(i, j) * ux(i, j) + h(i, j) * hx(i, j) - dpdx[i] - 0.5 * (ap + am);
        r.h(i, j) = -u(i, j) * hx(i, j) + h(i, j) * ux(i, j) - 0.5 * (ap - am);
        cmax = std::max(cmax, std::max(std::abs(cp), std::abs(cm)) / de + std::abs(u(i, j)) / dx);
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
    auto s = std::make_unique<ColumnImplicit>(g_, c, velocity_eq ? BC::Dirichlet : BC::Neumann, BC::Dirichlet, opt_.order);
    return *cache_.emplace(key, std::move(s)).first->second;
  }

  double step(Field& u, Field& h, double t, double dt) {
    const ARS222 ars;
    const double gm = ars.gamma, dl = ars.delta;
    const int nx = g_->nx();
    std::vector<double> zero(nx, 0.0);
    double c1 = 0.0;
    Tend n1 = explicit_part(u, h, t, &c1);
    double t2 = t + gm * dt, t3 = t + dt;
    Field u2 = u, h2 = h;
    u2.axpy(gm * dt, n1.u);
    h2.axpy(gm * dt, n1.h);
    solver(dt, true).solve(u2, zero, tr_.interp("u", t2));
    solver(dt, false).solve(h2, zero, tr_.interp("h", t2));
    // L Y2 recovered from the stage equation.
    Field lu2 = u2 - u, lh2 = h2 - h;
    lu2.axpy(-gm * dt, n1.u);
    lh2.axpy(-gm * dt, n1.h);
    lu2 *= 1.0 / (gm * dt);
    lh2 *= 1.0 / (gm * dt);
    Tend n2 = explicit_part(u2, h2, t2, nullptr);
    Field u3 = u, h3 = h;
    u3.axpy(dl * dt, n1.u).axpy((1.0 - dl) * dt, n2.u).axpy((1.0 - gm) * dt, lu2);
    h3.axpy(dl * dt, n1.h).axpy((1.0 - dl) * dt, n2.h).axpy((1.0 - gm) * dt, lh2);
    solver(dt, true).solve(u3, zero, tr_.interp("u", t3));
    solver(dt, false).solve(h3, zero, tr_.interp("h", t3));
    u = std::move(u3);
    h = std::move(h3);
    return c1 * dt;
  }

 private:
  const TraceSeries& tr_;
  GridPtr g_;
  BLOptions opt_;
  std::map<std::pair<double, bool>, std::unique_ptr<ColumnImplicit>> cache_;
};

void check_positivity(const Field& h, double t, double gate) {
  const Grid& g = h.grid();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      if (!(h(i, j) >= gate)) {
        std::ostringstream os;
        os << "solve_bl0: positivity gate violated, h^p = " << h(i, j) << " < " << gate << " at t=" << t
           << ", x=" << g.x(i) << ", eta=" << g.y(j);
        throw PositivityViolation(os.str(), t, g.x(i), g.y(j), h(i, j));
      }
}

}  // namespace

BLSolution0 solve_bl0(const TraceSeries& trace0, const GridPtr& blgrid, double dt, const BLOptions& opt) {
  trace0.require({"u", "h", "dx_p"}, "solve_bl0");
  if (trace0.nx() != blgrid->nx()) throw std::invalid_argument("solve_bl0: trace and grid nx differ");
  const auto& times = trace0.times();
  if (times.size() < 3) throw std::invalid_argument("solve_bl0: need at least 3 trace times");
  const int nx = blgrid->nx(), ny = blgrid->ny();
  BL0Stepper st(trace0, blgrid, opt);
  Field u(blgrid, "up"), h(blgrid, "hp");
  auto u00 = trace0.at("u", 0), h00 = trace0.at("h", 0);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      u(i, j) = j == 0 ? 0.0 : u00[i];
      h(i, j) = h00[i];
    }
  BLSolution0 sol;
  sol.traj = Trajectory(blgrid, {"up", "vp", "hp", "gp"});
  auto push = [&](double t) {
    Field v = st.velocity(ddx(u)), g = st.velocity(ddx(h));
    sol.traj.push(t, {u, v, h, g});
    sol.min_h.push_back(*std::min_element(h.values().begin(), h.values().end()));
  };
  push(times[0]);
  const double gate = 0.5 * opt.delta0;
  int taken = 0;
  for (std::size_t k = 1; k < times.size(); ++k) {
    double t0 = times[k - 1], span = times[k] - t0;
    int m = static_cast<int>(std::ceil(span / dt - 1e-9));
    double h_step = span / m;
    sol.dt = std::max(sol.dt, h_step);
    for (int s = 0; s < m; ++s) {
      double t = t0 + s * h_step;
      int sub = taken < opt.corner_steps ? opt.corner_substeps : 1;
      for (int q = 0; q < sub; ++q) {
        double c = st.step(u, h, t + q * h_step / sub, h_step / sub);
        sol.max_courant = std::max(sol.max_courant, c);
        if (c > opt.cfl_max) {
          std::ostringstream os;
          os << "solve_bl0: CFL violation at t=" << t << " (Courant " << c << " > " << opt.cfl_max << ")";
          throw std::runtime_error(os.str());
        }
      }
      ++taken;
      u.check_finite("solve_bl0 at t=" + std::to_string(t + h_step));
      h.check_finite("solve_bl0 at t=" + std::to_string(t + h_step));
      check_positivity(h, t + h_step, gate);
    }
    push(times[k]);
  }
  return sol;
}

BLProfile0 derive_profile0(const BLSolution0& sol, const TraceSeries& trace0) {
  const Trajectory& tr = sol.traj;
  const GridPtr& g = tr.grid();
  const int nx = g->nx(), ny = g->ny();
  BLProfile0 prof;
  prof.traj = Trajectory(g, {"ub0", "vb0", "hb0", "gb0"});
  prof.wall = TraceSeries(nx);
  for (int k = 0; k < tr.size(); ++k) {
    double t = tr.times()[k];
    auto ub = trace0.at("u", k), hb = trace0.at("h", k);
    Field u = tr.at(k, "up"), h = tr.at(k, "hp");
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        u(i, j) -= ub[i];
        h(i, j) -= hb[i];
      }
    Field v = tail_integral(ddx(u), 1e-6), gg = tail_integral(ddx(h), 1e-6);
    prof.wall.add_time(t);
    prof.wall.set("vb0", k, row_of(v, 0));
    prof.wall.set("gb0", k, row_of(gg, 0));
    prof.traj.push(t, {u, v, h, gg});
  }
  return prof;
}

Profile0Residual check_profile0_consistency(const BLProfile0& prof, const TraceSeries& trace0, const BLOptions& opt,
                                            double t_min) {
  const Trajectory& tr = prof.traj;
  const GridPtr& g = tr.grid();
  const int nx = g->nx(), ny = g->ny();
  Profile0Residual r;
  double mu = opt.mu, ka = opt.kappa;
  double ru = 0.0, rh = 0.0, rg = 0.0, su = 0.0, sh = 0.0, sg = 0.0;
  for (int k = 1; k + 1 < tr.size(); ++k) {
    if (tr.times()[k] < t_min) continue;
    const Field &u = tr.at(k, "ub0"), &v = tr.at(k, "vb0"), &h = tr.at(k, "hb0"), &gg = tr.at(k, "gb0");
    Field ut = tr.ddt(k, "ub0"), ht = tr.ddt(k, "hb0"), gt = tr.ddt(k, "gb0");
    Field ux = ddx(u), hx = ddx(h), vx = ddx(v), gx = ddx(gg);
    Field ue = ddy(u, opt.order), he = ddy(h, opt.order), ve = ddy(v, opt.order), ge = ddy(gg, opt.order);
    Field uee = d2y(u, opt.order), hee = d2y(h, opt.order), gee = d2y(gg, opt.order);
    auto ub = trace0.at("u", k), hb = trace0.at("h", k);
    auto dxub = dx_line(ub), dxhb = dx_line(hb);
    auto vw = prof.wall.at("vb0", k), gw = prof.wall.at("gb0", k);
    auto dxvw = dx_line(vw), dxgw = dx_line(gw);
    auto dxxub = dx_line(ub, 2), dxxhb = dx_line(hb, 2);
    for (int j = 1; j + 1 < ny; ++j) {
      double eta = g->y(j);
      for (int i = 0; i < nx; ++i) {
        double W = v(i, j) - vw[i] - eta * dxub[i];
        double Z = gg(i, j) - gw[i] - eta * dxhb[i];
        double U = u(i, j) + ub[i], H = h(i, j) + hb[i];
        double tu[] = {ut(i, j), U * ux(i, j), W * ue(i, j), -H * hx(i, j), -Z * he(i, j),
                       dxub[i] * u(i, j), -dxhb[i] * h(i, j), -mu * uee(i, j)};
        double th[] = {ht(i, j), U * hx(i, j), W * he(i, j), -H * ux(i, j), -Z * ue(i, j),
                       dxhb[i] * u(i, j), -dxub[i] * h(i, j), -ka * hee(i, j)};
        // g_b equation.
        double tg[] = {gt(i, j), U * gx(i, j), W * ge(i, j), -H * vx(i, j), -Z * ve(i, j),
                       -(dxgw[i] + eta * dxxhb[i]) * u(i, j), -dxhb[i] * v(i, j),
                       (dxvw[i] + eta * dxxub[i]) * h(i, j), dxub[i] * gg(i, j),
                       -ka * gee(i, j)};
        auto acc = [](const double* a, int n, double& res, double& sc) {
          double s = 0.0;
          for (int q = 0; q < n; ++q) {
            s += a[q];
            sc = std::max(sc, std::abs(a[q]));
          }
          res = std::max(res, std::abs(s));
        };
        acc(tu, 8, ru, su);
        acc(th, 8, rh, sh);
        acc(tg, 10, rg, sg);
      }
    }
  }
  r.u = ru / std::max(su, 1e-300);
  r.h = rh / std::max(sh, 1e-300);
  r.g = rg / std::max(sg, 1e-300);
  r.scale = std::max({su, sh, sg});
  return r;
}

}  // namespace mhdbl
