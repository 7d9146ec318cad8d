#include "mhdbl/cutoff.hpp"

#include <array>
#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

namespace mhdbl {

namespace {

// Truncated Taylor series c0 + c1 h + c2 h^2 + c3 h^3.
struct T3 {
  std::array<double, 4> c{};
};

T3 mul(const T3& a, const T3& b) {
  T3 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; i + j < 4; ++j) r.c[i + j] += a.c[i] * b.c[j];
  return r;
}

T3 recip(const T3& a) {
  T3 r;
  r.c[0] = 1.0 / a.c[0];
  for (int n = 1; n < 4; ++n) {
    double s = 0.0;
    for (int k = 1; k <= n; ++k) s += a.c[k] * r.c[n - k];
    r.c[n] = -s / a.c[0];
  }
  return r;
}

T3 texp(const T3& a) {
  // e^a with a = a0 + b: e^a0 * (1 + b + b^2/2 + b^3/6).
  T3 b = a;
  b.c[0] = 0.0;
  T3 b2 = mul(b, b), b3 = mul(b2, b);
  T3 r;
  double e = std::exp(a.c[0]);
  for (int n = 0; n < 4; ++n) r.c[n] = e * ((n == 0 ? 1.0 : 0.0) + b.c[n] + b2.c[n] / 2.0 + b3.c[n] / 6.0);
  return r;
}

// psi(s) = exp(-1/s) for s > 0, with s = s0 + sign*h.
T3 psi(double s0, double sign) {
  T3 r;
  if (s0 <= 0.0) return r;
  T3 s;
  s.c[0] = s0;
  s.c[1] = sign;
  T3 inv = recip(s);
  for (auto& v : inv.c) v = -v;
  return texp(inv);
}

}  // namespace

ChiJet chi_jet(double y) {
  if (y <= 1.0) return {1.0, 0.0, 0.0, 0.0};
  if (y >= 2.0) return {0.0, 0.0, 0.0, 0.0};
  T3 a = psi(2.0 - y, -1.0);
  T3 b = psi(y - 1.0, 1.0);
  T3 den = a;
  for (int n = 0; n < 4; ++n) den.c[n] += b.c[n];
  T3 q = mul(a, recip(den));
  return {q.c[0], q.c[1], 2.0 * q.c[2], 6.0 * q.c[3]};
}

double chi_moment1(double eta) {
  if (eta <= 1.0) return 0.5 * eta * eta;
  double top = std::min(eta, 2.0);
  auto f = [](double s) { return s * chi(s); };
  // Smooth integrand: fixed composite Gauss rule, accurate to roundoff.
  constexpr int panels = 16;
  const double w = (top - 1.0) / panels;
  double tail = 0.0;
  for (int p = 0; p < panels; ++p)
    tail += boost::math::quadrature::gauss<double, 20>::integrate(f, 1.0 + p * w, 1.0 + (p + 1) * w);
  return 0.5 + tail;
}

}  // namespace mhdbl
