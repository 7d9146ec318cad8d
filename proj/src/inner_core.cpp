#include "mhdbl/inner_core.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "mhdbl/fd.hpp"
#include "mhdbl/ops.hpp"
#include "mhdbl/spectral.hpp"

namespace mhdbl {

using cplx = std::complex<double>;

InnerVars::InnerVars(const GridPtr& g)
    : Um(g->ny(), 0.0), Hm(g->ny(), 0.0), w(g, "w"), a(g, "a") {}

InnerVars& InnerVars::axpy(double c, const InnerVars& o) {
  for (std::size_t j = 0; j < Um.size(); ++j) {
    Um[j] += c * o.Um[j];
    Hm[j] += c * o.Hm[j];
  }
  w.axpy(c, o.w);
  a.axpy(c, o.a);
  return *this;
}

InnerVars& InnerVars::operator*=(double c) {
  for (std::size_t j = 0; j < Um.size(); ++j) {
    Um[j] *= c;
    Hm[j] *= c;
  }
  w *= c;
  a *= c;
  return *this;
}

void InnerVars::dealias() {
  spectral::dealias(w.data(), w.nx(), w.ny());
  spectral::dealias(a.data(), a.nx(), a.ny());
}

void InnerVars::check_finite(const std::string& what) const {
  for (std::size_t j = 0; j < Um.size(); ++j)
    if (!std::isfinite(Um[j]) || !std::isfinite(Hm[j]))
      throw std::runtime_error(what + ": non-finite x-mean profile at j=" + std::to_string(j));
  w.check_finite(what);
  a.check_finite(what);
}

StreamSolver::StreamSolver(GridPtr g, int order) : grid_(std::move(g)), order_(order) {
  const Grid& gr = *grid_;
  const int ny = gr.ny(), N = ny - 1, nm = spectral::nmodes(gr.nx());
  const YOperator& D2 = gr.op(2, order);
  int kl = 0, ku = 0;
  for (int j = 1; j < N; ++j) {
    kl = std::max(kl, j - D2.start(j));
    ku = std::max(ku, D2.start(j) + D2.count(j) - 1 - j);
  }
  lu_.resize(nm);
  for (int k = 1; k < nm; ++k) {
    BandMatrix m(ny, kl, ku);
    m.at(0, 0) = 1.0;
    m.at(N, N) = 1.0;
    for (int j = 1; j < N; ++j) {
      const double* w = D2.w(j);
      for (int q = 0; q < D2.count(j); ++q) m.add(j, D2.start(j) + q, w[q]);
      m.add(j, j, -static_cast<double>(k) * k);
    }
    m.factor();
    lu_[k] = std::move(m);
  }
}

Field StreamSolver::solve(const Field& w, const std::vector<double>& psi_wall) const {
  const Grid& g = *grid_;
  const int nx = g.nx(), ny = g.ny(), N = ny - 1, nm = spectral::nmodes(nx);
  if (static_cast<int>(psi_wall.size()) != nx) throw std::invalid_argument("StreamSolver: wall size mismatch");
  std::vector<cplx> c(static_cast<std::size_t>(nm) * ny), pw(nm);
  spectral::forward(w.data(), c.data(), nx, ny);
  spectral::forward(psi_wall.data(), pw.data(), nx, 1);
  std::vector<cplx> col(ny);
  for (int k = 0; k < nm; ++k) {
    bool skip = k == 0 || (nx % 2 == 0 && k == nx / 2);
    if (skip) {
      for (int j = 0; j < ny; ++j) c[static_cast<std::size_t>(j) * nm + k] = 0.0;
      continue;
    }
    col[0] = pw[k];
    col[N] = 0.0;
    for (int j = 1; j < N; ++j) col[j] = -c[static_cast<std::size_t>(j) * nm + k];
    lu_[k].solve(col);
    for (int j = 0; j < ny; ++j) c[static_cast<std::size_t>(j) * nm + k] = col[j];
  }
  Field psi(grid_, "psi");
  spectral::backward(c.data(), psi.data(), nx, ny);
  return psi;
}

Field broadcast(const GridPtr& g, const std::vector<double>& prof, const std::string& label) {
  Field f(g, label);
  for (int j = 0; j < g->ny(); ++j) std::fill(f.row(j), f.row(j) + g->nx(), prof[j]);
  return f;
}

std::vector<double> x_mean(const Field& f) { return spectral::row_means(f.data(), f.nx(), f.ny()); }

Field fluctuation(const Field& f) {
  Field out = f;
  auto m = x_mean(f);
  for (int j = 0; j < f.ny(); ++j)
    for (int i = 0; i < f.nx(); ++i) out(i, j) -= m[j];
  return out;
}

std::vector<double> apply_y(const GridPtr& g, const std::vector<double>& prof, int deriv, int order) {
  std::vector<double> out(prof.size());
  g->op(deriv, order).apply(prof.data(), out.data(), 1);
  return out;
}

std::vector<double> dx_line(const std::vector<double>& v, int m) {
  std::vector<double> out(v.size());
  spectral::deriv(v.data(), out.data(), static_cast<int>(v.size()), 1, m);
  return out;
}

InnerFields derive_fields(const InnerVars& s, const Field& psi, int order) {
  const GridPtr& g = s.w.grid_ptr();
  InnerFields f;
  f.psi = psi;
  f.u = broadcast(g, s.Um) + ddy(psi, order);
  f.v = -ddx(psi);
  f.h = broadcast(g, s.Hm) + ddy(s.a, order);
  f.g = -ddx(s.a);
  std::vector<double> dUm = apply_y(g, s.Um, 1, order), dHm = apply_y(g, s.Hm, 1, order);
  for (auto& x : dUm) x = -x;
  for (auto& x : dHm) x = -x;
  f.omega = s.w + broadcast(g, dUm);
  f.j = broadcast(g, dHm) - d2x(s.a) - d2y(s.a, order);
  f.u.set_label("u");
  f.v.set_label("v");
  f.h.set_label("h");
  f.g.set_label("g");
  f.omega.set_label("omega");
  f.j.set_label("j");
  return f;
}

Flux& Flux::operator+=(const Flux& o) {
  F += o.F;
  G += o.G;
  e += o.e;
  return *this;
}

Flux bilinear_flux(const InnerFields& A, const InnerFields& B) {
  Flux f;
  f.F = A.u * B.omega - A.h * B.j;
  f.G = A.v * B.omega - A.g * B.j;
  f.e = A.u * B.g - A.v * B.h;
  return f;
}

InnerVars flux_tendency(const Flux& f, int order) {
  const GridPtr& g = f.F.grid_ptr();
  InnerVars t(g);
  t.Um = x_mean(f.G);
  Field Gp = fluctuation(f.G);
  t.w = -ddx(f.F) - ddy(Gp, order);
  t.w = fluctuation(t.w);
  t.Hm = apply_y(g, x_mean(f.e), 1, order);
  t.a = fluctuation(f.e);
  t.dealias();
  return t;
}

Field modified_pressure(const Flux& f, const Field& psi_t, int order) {
  const Grid& g = f.F.grid();
  const int nx = g.nx(), ny = g.ny();
  Field rhs = f.G - ddy(psi_t, order);
  Field pi(f.F.grid_ptr(), "Pi");
  spectral::inv_dx(rhs.data(), pi.data(), nx, ny);
  auto mF = x_mean(f.F);
  std::vector<double> m(ny, 0.0);
  for (int j = ny - 2; j >= 0; --j) m[j] = m[j + 1] + 0.5 * (g.y(j + 1) - g.y(j)) * (mF[j] + mF[j + 1]);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) pi(i, j) += m[j];
  return pi;
}

Field pressure_shift(const InnerFields& A, const InnerFields* B) {
  if (!B) return 0.5 * (A.u * A.u + A.v * A.v - A.h * A.h - A.g * A.g);
  return A.u * B->u + A.v * B->v - A.h * B->h - A.g * B->g;
}

namespace {

double integrate(const Field& f) {
  const Grid& g = f.grid();
  const auto& w = g.wy();
  double s = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    const double* r = f.row(j);
    double rs = 0.0;
    for (int i = 0; i < g.nx(); ++i) rs += r[i];
    s += w[j] * rs;
  }
  return s * g.dx();
}

}  // namespace

double field_energy(const Field& u, const Field& v, const Field& h, const Field& g) {
  return 0.5 * integrate(u * u + v * v + h * h + g * g);
}

double cross_helicity(const Field& u, const Field& v, const Field& h, const Field& g) {
  return integrate(u * h + v * g);
}

double courant(const Field& u, const Field& v, double dt) {
  const Grid& g = u.grid();
  const int nx = g.nx(), ny = g.ny();
  double c = 0.0;
  for (int j = 0; j < ny; ++j) {
    double dy = j == 0 ? g.y(1) - g.y(0)
                       : (j == ny - 1 ? g.y(j) - g.y(j - 1) : std::min(g.y(j) - g.y(j - 1), g.y(j + 1) - g.y(j)));
    for (int i = 0; i < nx; ++i) c = std::max(c, dt * (std::abs(u(i, j)) / g.dx() + std::abs(v(i, j)) / dy));
  }
  return c;
}

InnerVars vars_from_primitive(const VectorState& s, int order) {
  const GridPtr& g = s.u.grid_ptr();
  const int nx = g->nx(), ny = g->ny();
  InnerVars out(g);
  out.Um = x_mean(s.u);
  out.Hm = x_mean(s.h);
  Field psi(g, "psi");
  spectral::inv_dx(s.v.data(), psi.data(), nx, ny);
  psi *= -1.0;
  spectral::inv_dx(s.g.data(), out.a.data(), nx, ny);
  out.a *= -1.0;
  out.w = -(d2x(psi) + d2y(psi, order));
  out.w = fluctuation(out.w);
  out.w.set_label("w");
  out.a.set_label("a");
  out.dealias();
  return out;
}

void ssprk3_step(InnerVars& s, double t, double dt,
                 const std::function<InnerVars(const InnerVars&, double)>& rhs,
                 const std::function<void(InnerVars&, double)>& fix) {
  InnerVars s1 = s;
  s1.axpy(dt, rhs(s, t));
  fix(s1, t + dt);
  InnerVars s2 = s1;
  s2.axpy(dt, rhs(s1, t + dt));
  s2 *= 0.25;
  s2.axpy(0.75, s);
  fix(s2, t + 0.5 * dt);
  InnerVars s3 = s2;
  s3.axpy(dt, rhs(s2, t + 0.5 * dt));
  s3 *= 2.0 / 3.0;
  s3.axpy(1.0 / 3.0, s);
  fix(s3, t + dt);
  s = std::move(s3);
}

}  // namespace mhdbl
