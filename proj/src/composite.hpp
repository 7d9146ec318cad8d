#pragma once

#include "mhdbl/assembler.hpp"

namespace mhdbl::detail {

/// A quantity on the assembly grid with the derivatives the residuals use.
struct C {
  double v = 0, t = 0, x = 0, xx = 0, y = 0, yy = 0;
};

inline C operator+(C a, const C& b) {
  a.v += b.v;
  a.t += b.t;
  a.x += b.x;
  a.xx += b.xx;
  a.y += b.y;
  a.yy += b.yy;
  return a;
}
inline C operator*(double c, C a) {
  a.v *= c;
  a.t *= c;
  a.x *= c;
  a.xx *= c;
  a.y *= c;
  a.yy *= c;
  return a;
}
inline C operator-(const C& a, const C& b) { return a + (-1.0) * b; }

inline C inner(const J& f) { return {f.v, f.t, f.x, f.xx, f.y, f.yy}; }
/// Layer field read at eta = y/s: d_y = d_eta / s.
inline C layer(const J& f, double s) { return {f.v, f.t, f.x, f.xx, f.y / s, f.yy / (s * s)}; }
/// a(y) f with a, a', a'' given.
inline C weighted(double a0, double a1, double a2, const C& f) {
  return {a0 * f.v, a0 * f.t, a0 * f.x, a0 * f.xx, a1 * f.v + a0 * f.y, a2 * f.v + 2.0 * a1 * f.y + a0 * f.yy};
}
inline double lap(const C& f) { return f.xx + f.yy; }
/// d_x (a b)
inline double dx_prod(const C& a, const C& b) { return a.x * b.v + a.v * b.x; }

struct Composite {
  C u, v, h, g;
  double p = 0, px = 0, py = 0;
  C tau_u, tau_h, tau_g, tub1, tvb1, thb1, tgb1;
};

inline Composite compose(const Pt& p) {
  const double s = p.s;
  const ChiJet& c = p.chi;
  auto chi0 = [&](const C& f) { return weighted(c.v, c.d1, c.d2, f); };
  auto chi1 = [&](const C& f) { return weighted(c.d1, c.d2, c.d3, f); };
  Composite a;
  a.tau_u = chi1(layer(p.Ub1, s));
  a.tau_h = chi1(layer(p.Hb1, s)) + layer(p.rho, s);
  a.tau_g = -1.0 * layer(p.Rx, s);
  a.tub1 = chi0(layer(p.ub1, s)) + s * a.tau_u;
  a.tvb1 = chi0(layer(p.vb1, s));
  a.thb1 = chi0(layer(p.hb1, s)) + s * a.tau_h;
  a.tgb1 = chi0(layer(p.gb1, s)) + s * a.tau_g;
  a.u = inner(p.u0) + layer(p.ub0, s) + s * (inner(p.u1) + a.tub1);
  a.v = inner(p.v0) + s * layer(p.vb0, s) + s * (inner(p.v1) + s * a.tvb1);
  a.h = inner(p.h0) + layer(p.hb0, s) + s * (inner(p.h1) + a.thb1);
  a.g = inner(p.g0) + s * layer(p.gb0, s) + s * (inner(p.g1) + s * a.tgb1);
  a.p = p.p0.v + s * p.p1.v + s * s * p.P.v;
  a.px = p.p0.x + s * p.p1.x + s * s * p.P.x;
  a.py = p.p0.y + s * p.p1.y + s * p.P.y;
  return a;
}

}  // namespace mhdbl::detail
