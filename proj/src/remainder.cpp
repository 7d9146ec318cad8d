#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "composite.hpp"
#include "mhdbl/assembler.hpp"
#include "mhdbl/fd.hpp"
#include "mhdbl/ops.hpp"

namespace mhdbl {

using detail::C;
using detail::Composite;
using detail::Pt;
using detail::dx_prod;
using detail::lap;

namespace {

/// Pointwise remainder pieces for the four components.
struct PointRemainder {
  double r0[4], r1[4], rc[4], rh[4], direct[4], stage[4], scale[4];
};

PointRemainder evaluate(const Pt& p, double mu, double ka) {
  using detail::inner;
  using detail::layer;
  const double s = p.s, e = s * s, y = p.y, Y = p.eta, y2 = 0.5 * y * y, Y2 = 0.5 * Y * Y;
  const double c0 = p.chi.v, c1 = p.chi.d1, c2 = p.chi.d2;
  const C u0 = inner(p.u0), v0 = inner(p.v0), h0 = inner(p.h0), g0 = inner(p.g0), p0 = inner(p.p0);
  const C u1 = inner(p.u1), v1 = inner(p.v1), h1 = inner(p.h1), g1 = inner(p.g1), p1 = inner(p.p1);
  const C ub0 = layer(p.ub0, s), vb0 = layer(p.vb0, s), hb0 = layer(p.hb0, s), gb0 = layer(p.gb0, s);
  const C ub1 = layer(p.ub1, s), vb1 = layer(p.vb1, s), hb1 = layer(p.hb1, s), gb1 = layer(p.gb1, s);
  const Composite a = detail::compose(p);
  const C &ua = a.u, &va = a.v, &ha = a.h, &ga = a.g;
  const C &tau_u = a.tau_u, &tau_h = a.tau_h, &tau_g = a.tau_g;
  const C &tub1 = a.tub1, &tvb1 = a.tvb1, &thb1 = a.thb1, &tgb1 = a.tgb1;
  const double U0 = p.U0, H0 = p.H0, U1 = p.U1, V1 = p.V1, H1 = p.H1, G1 = p.G1;
  PointRemainder r{};

  // Direct residual of the viscous system.
  r.direct[0] = ua.t + ua.v * ua.x + va.v * ua.y + a.px - ha.v * ha.x - ga.v * ha.y - mu * e * lap(ua);
  r.direct[1] = va.t + ua.v * va.x + va.v * va.y + a.py - ha.v * ga.x - ga.v * ga.y - mu * e * lap(va);
  r.direct[2] = ha.t + ua.v * ha.x + va.v * ha.y - ha.v * ua.x - ga.v * ua.y - ka * e * lap(ha);
  r.direct[3] = ga.t + ua.v * ga.x + va.v * ga.y - ha.v * va.x - ga.v * va.y - ka * e * lap(ga);
  auto mag = [](std::initializer_list<double> l) {
    double m = 0.0;
    for (double x : l) m += std::abs(x);
    return m;
  };
  r.scale[0] = mag({ua.t, ua.v * ua.x, va.v * ua.y, a.px, ha.v * ha.x, ga.v * ha.y, mu * e * lap(ua)});
  r.scale[1] = mag({va.t, ua.v * va.x, va.v * va.y, a.py, ha.v * ga.x, ga.v * ga.y, mu * e * lap(va)});
  r.scale[2] = mag({ha.t, ua.v * ha.x, va.v * ha.y, ha.v * ua.x, ga.v * ua.y, ka * e * lap(ha)});
  r.scale[3] = mag({ga.t, ua.v * ga.x, va.v * ga.y, ha.v * va.x, ga.v * va.y, ka * e * lap(ga)});

  // Leading-profile terms; the sqrt(eps) bracket on the last line of r0[0] and
  // r0[2] completes the expansion of the first-order inner fields.
  const double vq = v0.v - y * p.dyv0 - y2 * p.dyyv0 + s * (v1.v - V1 - y * p.dyv1);
  const double gq = g0.v - y * p.dyg0 - y2 * p.dyyg0 + s * (g1.v - G1 - y * p.dyg1);
  r.r0[0] = (u0.v - U0 - y * p.dyu0) * ub0.x + vq * ub0.y - (h0.v - H0 - y * p.dyh0) * hb0.x - gq * hb0.y +
            (u0.x - p.dxu0 - y * p.dxyu0) * ub0.v + s * (u0.y - p.dyu0) * vb0.v -
            (h0.x - p.dxh0 - y * p.dxyh0) * hb0.v - s * (h0.y - p.dyh0) * gb0.v +
            s * ((u1.v - U1) * ub0.x - (h1.v - H1) * hb0.x + (u1.x - p.dxu1) * ub0.v - (h1.x - p.dxh1) * hb0.v);
  r.r0[2] = (u0.v - U0 - y * p.dyu0) * hb0.x + vq * hb0.y - (h0.v - H0 - y * p.dyh0) * ub0.x - gq * ub0.y +
            (h0.x - p.dxh0 - y * p.dxyh0) * ub0.v + s * (h0.y - p.dyh0) * vb0.v -
            (u0.x - p.dxu0 - y * p.dxyu0) * hb0.v - s * (u0.y - p.dyu0) * gb0.v +
            s * ((u1.v - U1) * hb0.x - (h1.v - H1) * ub0.x + (h1.x - p.dxh1) * ub0.v - (u1.x - p.dxu1) * hb0.v);
  const double vl = v0.v - y * p.dyv0 + s * (v1.v - V1), gl = g0.v - y * p.dyg0 + s * (g1.v - G1);
  const double vx = v0.x - y * p.dxyv0 + s * (v1.x - p.dxv1), gx = g0.x - y * p.dxyg0 + s * (g1.x - p.dxg1);
  r.r0[1] = s * (u0.v - U0) * vb0.x + s * vl * vb0.y - s * (h0.v - H0) * gb0.x - s * gl * gb0.y + vx * ub0.v +
            s * (v0.y - p.dyv0) * vb0.v - gx * hb0.v - s * (g0.y - p.dyg0) * gb0.v;
  r.r0[3] = s * (u0.v - U0) * gb0.x + s * vl * gb0.y - s * (h0.v - H0) * vb0.x - s * gl * vb0.y + gx * ub0.v +
            s * (g0.y - p.dyg0) * vb0.v - vx * hb0.v - s * (v0.y - p.dyv0) * gb0.v;

  // First-order profile terms, multiplied by sqrt(eps) chi.
  double q[4];
  q[0] = (u0.v - U0) * ub1.x + vl * ub1.y - (h0.v - H0) * hb1.x - gl * hb1.y + (u0.x - p.dxu0) * ub1.v -
         (h0.x - p.dxh0) * hb1.v;
  q[2] = (u0.v - U0) * hb1.x + vl * hb1.y - (h0.v - H0) * ub1.x - gl * ub1.y + (h0.x - p.dxh0) * ub1.v -
         (u0.x - p.dxu0) * hb1.v;
  q[1] = s * v0.v * vb1.y - s * g0.v * gb1.y + v0.x * ub1.v - g0.x * hb1.v;
  q[3] = s * v0.v * gb1.y - s * g0.v * vb1.y + g0.x * ub1.v - v0.x * hb1.v;
  for (int i = 0; i < 4; ++i) r.r1[i] = s * c0 * q[i];

  // Cutoff terms (tangential components only).
  const double A1 = y * p.dyu0 + s * U1, A2 = y2 * p.dyyv0 + s * y * p.dyv1, A4 = s * p.dyu0;
  const double B1 = y * p.dyh0 + s * H1, B2 = y2 * p.dyyg0 + s * y * p.dyg1, B4 = s * p.dyh0;
  const double Au = y * p.dxyu0 + s * p.dxu1, Ah = y * p.dxyh0 + s * p.dxh1;
  r.rc[0] = (1.0 - c0) * (A1 * ub0.x + A2 * ub0.y + Au * ub0.v + A4 * vb0.v - B1 * hb0.x - B2 * hb0.y - Ah * hb0.v -
                          B4 * gb0.v) +
            s * v0.v * (c1 * ub1.v + s * tau_u.y) - s * g0.v * (c1 * hb1.v + s * tau_h.y);
  r.rc[2] = (1.0 - c0) * (A1 * hb0.x + A2 * hb0.y + Ah * ub0.v + B4 * vb0.v - B1 * ub0.x - B2 * ub0.y - Au * hb0.v -
                          A4 * gb0.v) +
            s * v0.v * (c1 * hb1.v + s * tau_h.y) - s * g0.v * (c1 * ub1.v + s * tau_u.y);

  // Higher-order terms, multiplied by eps.
  const C U = u1 + tub1, H = h1 + thb1, V = v1 + vb0, G = g1 + gb0;
  const C u0b = u0 + ub0, h0b = h0 + hb0;
  double rh[4];
  rh[0] = p.P.x + tau_u.t + U.v * U.x + dx_prod(u0b, tau_u) + V.v * (u1.y + c1 * ub1.v + s * tau_u.y) +
          tvb1.v * (u0 + s * u1 + s * tub1).y - H.v * H.x - dx_prod(h0b, tau_h) -
          G.v * (h1.y + c1 * hb1.v + s * tau_h.y) - tgb1.v * (h0 + s * h1 + s * thb1).y - s * tau_g.v * hb0.y -
          mu * (lap(u0 + s * u1) + (ub0 + s * tub1).xx + 2.0 * s * c1 * ub1.y + s * c2 * ub1.v + e * tau_u.yy);
  rh[2] = tau_h.t + U.v * H.x + u0b.v * tau_h.x + tau_u.v * h0b.x + V.v * (h1.y + c1 * hb1.v + s * tau_h.y) +
          tvb1.v * (h0 + s * h1 + s * thb1).y - H.v * U.x - h0b.v * tau_u.x - tau_h.v * u0b.x -
          G.v * (u1.y + c1 * ub1.v + s * tau_u.y) - tgb1.v * (u0 + s * u1 + s * tub1).y - s * tau_g.v * ub0.y -
          ka * (lap(h0 + s * h1) + (hb0 + s * thb1).xx + 2.0 * s * c1 * hb1.y + s * c2 * hb1.v + e * tau_h.yy);
  rh[1] = tvb1.t + U.v * V.x + V.v * (v1 + s * tvb1).y + ua.v * tvb1.x + tvb1.v * va.y + v0.x * tau_u.v +
          c1 * v0.v * vb1.v - H.v * G.x - G.v * (g1 + s * tgb1).y - ha.v * tgb1.x - tgb1.v * ga.y -
          g0.x * tau_h.v - g0.v * (c1 * gb1.v + s * tau_g.y) -
          mu * (lap(v0 + s * v1 + e * tvb1) + s * vb0.xx);
  // The second term uses g1 where the h1 of the printed formula does not close.
  rh[3] = tgb1.t + U.v * G.x + V.v * (g1 + s * tgb1).y + ua.v * tgb1.x + tvb1.v * ga.y + g0.x * tau_u.v +
          v0.v * (c1 * gb1.v + s * tau_g.y) - H.v * V.x - G.v * (v1 + s * tvb1).y - ha.v * tvb1.x -
          tgb1.v * va.y - v0.x * tau_h.v - c1 * g0.v * vb1.v -
          ka * (lap(g0 + s * g1 + e * tgb1) + s * gb0.xx);
  for (int i = 0; i < 4; ++i) r.rh[i] = e * rh[i];

  // Stage residuals. Layer slots .y/.yy are eta-derivatives here.
  auto adv = [](const C& a1, const C& b1, const C& f) { return a1.v * f.x + b1.v * f.y; };
  const double E0[4] = {
      u0.t + adv(u0, v0, u0) + p0.x - adv(h0, g0, h0), v0.t + adv(u0, v0, v0) + p0.y - adv(h0, g0, g0),
      h0.t + adv(u0, v0, h0) - adv(h0, g0, u0), g0.t + adv(u0, v0, g0) - adv(h0, g0, v0)};
  const double E1[4] = {
      u1.t + adv(u0, v0, u1) + p1.x - adv(h0, g0, h1) + adv(u1, v1, u0) - adv(h1, g1, h0),
      v1.t + adv(u0, v0, v1) + p1.y - adv(h0, g0, g1) + adv(u1, v1, v0) - adv(h1, g1, g0),
      h1.t + adv(u0, v0, h1) - adv(h0, g0, u1) + adv(u1, v1, h0) - adv(h1, g1, u0),
      g1.t + adv(u0, v0, g1) - adv(h0, g0, v1) + adv(u1, v1, g0) - adv(h1, g1, v0)};
  const detail::J &Ub = p.ub0, &Vb = p.vb0, &Hb = p.hb0, &Gb = p.gb0;
  const detail::J &Ub1 = p.ub1, &Vb1 = p.vb1, &Hb1 = p.hb1, &Gb1 = p.gb1;
  const double W = Vb.v - p.V0b - Y * p.dxu0, Z = Gb.v - p.G0b - Y * p.dxh0;
  const double B0u = Ub.t + (U0 + Ub.v) * Ub.x + W * Ub.y - (H0 + Hb.v) * Hb.x - Z * Hb.y + p.dxu0 * Ub.v -
                     p.dxh0 * Hb.v - mu * Ub.yy;
  const double B0h = Hb.t + (U0 + Ub.v) * Hb.x + W * Hb.y - (H0 + Hb.v) * Ub.x - Z * Ub.y + p.dxh0 * Ub.v -
                     p.dxu0 * Hb.v - ka * Hb.yy;
  const double B0g = Gb.t + (U0 + Ub.v) * Gb.x + W * Gb.y - (H0 + Hb.v) * Vb.x - Z * Vb.y -
                     (p.dxG0b + Y * p.dxxh0) * Ub.v - p.dxh0 * Vb.v + (p.dxV0b + Y * p.dxxu0) * Hb.v +
                     p.dxu0 * Gb.v - ka * Gb.yy;
  const double Wv = Vb.v + V1 + Y * p.dyv0, Wg = Gb.v + G1 + Y * p.dyg0;
  const double LPv = -Vb.t - (Ub.v + U0) * Vb.x - Wv * Vb.y + (Hb.v + H0) * Gb.x + Wg * Gb.y + mu * Vb.yy -
                     (p.dxv1 + Y * p.dxyv0) * Ub.v - p.dyv0 * Vb.v + (p.dxg1 + Y * p.dxyg0) * Hb.v + p.dyg0 * Gb.v;
  const double B0v = p.P.y - LPv;
  const double Fa = U1 + Y * p.dyu0, Fb = Y * p.dyv1 + Y2 * p.dyyv0, Fc = H1 + Y * p.dyh0,
               Fd = Y * p.dyg1 + Y2 * p.dyyg0, Fe = p.dxu1 + Y * p.dxyu0, Ff = p.dxh1 + Y * p.dxyh0;
  const double B1u = Ub1.t + (Ub.v + U0) * Ub1.x + Wv * Ub1.y - (Hb.v + H0) * Hb1.x - Wg * Hb1.y +
                     (Ub.x + p.dxu0) * Ub1.v + Ub.y * Vb1.v - (Hb.x + p.dxh0) * Hb1.v - Hb.y * Gb1.v - mu * Ub1.yy -
                     (-Fa * Ub.x - Fb * Ub.y + Fc * Hb.x + Fd * Hb.y - Fe * Ub.v - p.dyu0 * Vb.v + Ff * Hb.v +
                      p.dyh0 * Gb.v);
  const double B1h = Hb1.t + (Ub.v + U0) * Hb1.x + Wv * Hb1.y - (Hb.v + H0) * Ub1.x - Wg * Ub1.y +
                     (Hb.x + p.dxh0) * Ub1.v + Hb.y * Vb1.v - (Ub.x + p.dxu0) * Hb1.v - Ub.y * Gb1.v - ka * Hb1.yy -
                     (-Fa * Hb.x - Fb * Hb.y + Fc * Ub.x + Fd * Ub.y - Ff * Ub.v - p.dyh0 * Vb.v + Fe * Hb.v +
                      p.dyu0 * Gb.v);
  const double NBv = V1 + p.V0b, NBg = G1 + p.G0b, dNBv = p.dxv1 + p.dxV0b, dNBg = p.dxg1 + p.dxG0b;
  r.stage[0] = E0[0] + s * E1[0] + B0u + s * c0 * B1u + NBv * Ub.y - NBg * Hb.y;
  r.stage[1] = E0[1] + s * E1[1] + s * B0v;
  r.stage[2] = E0[2] + s * E1[2] + B0h + s * c0 * B1h + NBv * Hb.y - NBg * Ub.y;
  r.stage[3] = E0[3] + s * E1[3] + s * B0g + s * (dNBg * Ub.v + NBg * Ub.x - dNBv * Hb.v - NBv * Hb.x);
  return r;
}

}  // namespace

RemainderSnapshot remainder_snapshot(const ApproxSolution& a, int k, double mu, double kappa) {
  detail::Atoms A = a.atoms(k);
  const GridPtr& g = a.grid();
  RemainderSnapshot out;
  out.time = a.times()[k];
  for (int i = 0; i < 4; ++i) {
    std::string n = "R" + std::to_string(i + 1);
    out.R[i] = {Field(g, n), Field(g, n + "^0"), Field(g, n + "^1"), Field(g, n + "^C"), Field(g, n + "^H")};
    out.direct[i] = Field(g, n + " direct");
    out.stage[i] = Field(g, n + " stage");
  }
  double defect[4] = {0, 0, 0, 0}, scale[4] = {0, 0, 0, 0};
  for (int j = 0; j < g->ny(); ++j)
    for (int ix = 0; ix < g->nx(); ++ix) {
      PointRemainder r = evaluate(A.at(ix, j), mu, kappa);
      for (int i = 0; i < 4; ++i) {
        double tot = r.r0[i] + r.r1[i] + r.rc[i] + r.rh[i];
        out.R[i].total(ix, j) = tot;
        out.R[i].r0(ix, j) = r.r0[i];
        out.R[i].r1(ix, j) = r.r1[i];
        out.R[i].rc(ix, j) = r.rc[i];
        out.R[i].rh(ix, j) = r.rh[i];
        out.direct[i](ix, j) = r.direct[i];
        out.stage[i](ix, j) = r.stage[i];
        defect[i] = std::max(defect[i], std::abs(r.direct[i] - tot - r.stage[i]));
        scale[i] = std::max(scale[i], r.scale[i]);
      }
    }
  for (int i = 0; i < 4; ++i) out.identity_defect[i] = scale[i] > 0.0 ? defect[i] / scale[i] : defect[i];
  return out;
}

std::array<double, 4> RemainderReport::sup_l2() const {
  std::array<double, 4> m{0, 0, 0, 0};
  for (const auto& r : l2)
    for (int i = 0; i < 4; ++i) m[i] = std::max(m[i], r[i]);
  return m;
}

RemainderReport remainders(const ApproxSolution& a, double mu, double kappa, const std::vector<int>& snapshots) {
  RemainderReport rep;
  rep.eps = a.eps();
  for (int k : snapshots) {
    if (k < 1 || k > a.size() - 2)
      throw std::invalid_argument("remainders: snapshot " + std::to_string(k) + " is not interior");
    RemainderSnapshot s = remainder_snapshot(a, k, mu, kappa);
    rep.snapshots.push_back(k);
    rep.times.push_back(s.time);
    std::array<double, 4> l2, r0, r1, rc, rh, st, di;
    for (int i = 0; i < 4; ++i) {
      l2[i] = l2_norm(s.R[i].total);
      r0[i] = l2_norm(s.R[i].r0);
      r1[i] = l2_norm(s.R[i].r1);
      rc[i] = l2_norm(s.R[i].rc);
      rh[i] = l2_norm(s.R[i].rh);
      st[i] = l2_norm(s.stage[i]);
      di[i] = l2_norm(s.direct[i]);
    }
    rep.l2.push_back(l2);
    rep.r0.push_back(r0);
    rep.r1.push_back(r1);
    rep.rc.push_back(rc);
    rep.rh.push_back(rh);
    rep.stage.push_back(st);
    rep.direct.push_back(di);
    rep.identity_defect.push_back(s.identity_defect);
  }
  return rep;
}

std::vector<NormRow> remainder_norms(const ApproxSolution& a, double mu, double kappa,
                                     const std::vector<int>& snapshots, int max_order) {
  if (max_order < 0 || max_order > 3) throw std::invalid_argument("remainder_norms: max_order must be in [0, 3]");
  std::map<int, std::array<Field, 4>> cache;
  auto R = [&](int k) -> const std::array<Field, 4>& {
    auto it = cache.find(k);
    if (it == cache.end()) {
      RemainderSnapshot s = remainder_snapshot(a, k, mu, kappa);
      it = cache.emplace(k, std::array<Field, 4>{s.R[0].total, s.R[1].total, s.R[2].total, s.R[3].total}).first;
    }
    return it->second;
  };
  const auto& times = a.times();
  std::vector<NormRow> rows;
  for (int k : snapshots) {
    if (k < 1 || k > a.size() - 2)
      throw std::invalid_argument("remainder_norms: snapshot " + std::to_string(k) + " is not interior");
    // Centered stencils over interior snapshots: 3 points up to d_t^2, 5 for d_t^3.
    int room = std::min(k - 1, a.size() - 2 - k);
    int max_t = max_order;
    if (max_t == 3 && room < 2) max_t = 2;
    if (max_t >= 1 && room < 1) max_t = 0;
    if (max_t < max_order)
      spdlog::warn("remainder_norms: time derivatives limited to order {} at t={} (snapshots missing)", max_t,
                   times[k]);
    for (int at = 0; at <= max_t; ++at) {
      int half = at == 0 ? 0 : (at == 3 ? 2 : 1);
      std::vector<double> w = at == 0 ? std::vector<double>{1.0}
                                      : fornberg_weights(times[k], &times[k - half], 2 * half + 1, at);
      for (int i = 0; i < 4; ++i) {
        Field d = w[0] * R(k - half)[i];
        for (int q = 1; q <= 2 * half; ++q) d.axpy(w[q], R(k - half + q)[i]);
        for (int ax = 0; at + ax <= max_order; ++ax) {
          rows.push_back({times[k], i + 1, at, ax, l2_norm(d)});
          d = ddx(d);
        }
      }
    }
  }
  return rows;
}

void write_remainder_csv(const std::vector<NormRow>& rows, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_remainder_csv: cannot open " + path.string());
  f << "time,i,alpha_t,alpha_x,l2_norm\n" << std::setprecision(17);
  for (const auto& r : rows) f << r.time << ',' << r.i << ',' << r.alpha_t << ',' << r.alpha_x << ',' << r.l2 << '\n';
  if (!f) throw std::runtime_error("write_remainder_csv: write failed for " + path.string());
}

std::vector<NormRow> read_remainder_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("read_remainder_csv: cannot open " + path.string());
  std::string line;
  std::getline(f, line);
  if (line != "time,i,alpha_t,alpha_x,l2_norm") throw std::runtime_error("read_remainder_csv: bad header in " + path.string());
  std::vector<NormRow> rows;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream is(line);
    NormRow r;
    char c1, c2, c3, c4;
    if (!(is >> r.time >> c1 >> r.i >> c2 >> r.alpha_t >> c3 >> r.alpha_x >> c4 >> r.l2))
      throw std::runtime_error("read_remainder_csv: malformed line '" + line + "'");
    rows.push_back(r);
  }
  return rows;
}

DirectCheck check_direct_fd(const ApproxSolution& a, int k, double mu, double kappa) {
  if (k < 1 || k > a.size() - 2) throw std::invalid_argument("check_direct_fd: snapshot must be interior");
  const auto& times = a.times();
  auto w = fornberg_weights(times[k], &times[k - 1], 3, 1);
  VectorState f[3] = {a.fields(k - 1), a.fields(k), a.fields(k + 1)};
  auto dt = [&](Field VectorState::*m) {
    Field d = w[0] * (f[0].*m);
    d.axpy(w[1], f[1].*m);
    d.axpy(w[2], f[2].*m);
    return d;
  };
  const VectorState& s = f[1];
  const double e = a.eps();
  auto residual = [&](int order) {
    auto dy = [&](const Field& x) { return ddy(x, order); };
    auto lp = [&](const Field& x) { return d2x(x) + d2y(x, order); };
    std::array<Field, 4> r;
    r[0] = dt(&VectorState::u) + s.u * ddx(s.u) + s.v * dy(s.u) + ddx(*s.p) - s.h * ddx(s.h) - s.g * dy(s.h) -
           (mu * e) * lp(s.u);
    r[1] = dt(&VectorState::v) + s.u * ddx(s.v) + s.v * dy(s.v) + dy(*s.p) - s.h * ddx(s.g) - s.g * dy(s.g) -
           (mu * e) * lp(s.v);
    r[2] = dt(&VectorState::h) + s.u * ddx(s.h) + s.v * dy(s.h) - s.h * ddx(s.u) - s.g * dy(s.u) -
           (kappa * e) * lp(s.h);
    r[3] = dt(&VectorState::g) + s.u * ddx(s.g) + s.v * dy(s.g) - s.h * ddx(s.v) - s.g * dy(s.v) -
           (kappa * e) * lp(s.g);
    return r;
  };
  auto r4 = residual(4), r2 = residual(2);
  RemainderSnapshot rs = remainder_snapshot(a, k, mu, kappa);
  DirectCheck out;
  for (int i = 0; i < 4; ++i) {
    Field ref = rs.R[i].total + rs.stage[i];
    out.reference[i] = l2_norm(ref);
    out.mismatch[i] = l2_norm(r4[i] - ref);
    out.trunc[i] = l2_norm(r4[i] - r2[i]);
  }
  return out;
}

}  // namespace mhdbl
