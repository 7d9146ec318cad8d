#pragma once

namespace mhdbl {

/// Smooth cutoff: 1 on [0,1], 0 on [2,inf), built from psi(s) = exp(-1/s):
/// chi(y) = psi(2-y) / (psi(2-y) + psi(y-1)).
struct ChiJet {
  double v = 0.0, d1 = 0.0, d2 = 0.0, d3 = 0.0;
};

/// Value and first three derivatives, from truncated Taylor arithmetic.
ChiJet chi_jet(double y);
inline double chi(double y) { return chi_jet(y).v; }

/// Integral of s*chi(s) over [0, eta]: eta^2/2 for eta <= 1, composite
/// Gauss-Legendre on the transition interval otherwise.
double chi_moment1(double eta);

}  // namespace mhdbl
