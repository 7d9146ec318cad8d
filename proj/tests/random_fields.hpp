#pragma once

#include <array>
#include <cmath>
#include <random>

#include "mhdbl/cutoff.hpp"
#include "mhdbl/diagnostics.hpp"

namespace mhdbl::testing {

/// Random smooth psi with psi = 0 on the wall and its exact derivatives.
struct RandomPsi {
  Field psi, dy, dx;
};
inline RandomPsi random_psi(const GridPtr& g, std::mt19937& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::array<double, 8> c{};
  for (auto& v : c) v = U(rng);
  double l = 1.0 + 0.5 * (U(rng) + 1.0);
  // psi = y e^{-y/l} (c0 + c1 cos x + c2 sin x + c3 cos 2x + c4 sin 2x) + y^2 e^{-y} (c5 + c6 cos 3x + c7 sin x)
  auto X1 = [c](double x) { return c[0] + c[1] * std::cos(x) + c[2] * std::sin(x) + c[3] * std::cos(2 * x) + c[4] * std::sin(2 * x); };
  auto X1x = [c](double x) { return -c[1] * std::sin(x) + c[2] * std::cos(x) - 2 * c[3] * std::sin(2 * x) + 2 * c[4] * std::cos(2 * x); };
  auto X2 = [c](double x) { return c[5] + c[6] * std::cos(3 * x) + c[7] * std::sin(x); };
  auto X2x = [c](double x) { return -3 * c[6] * std::sin(3 * x) + c[7] * std::cos(x); };
  auto Y1 = [l](double y) { return y * std::exp(-y / l); };
  auto Y1y = [l](double y) { return (1.0 - y / l) * std::exp(-y / l); };
  auto Y2 = [](double y) { return y * y * std::exp(-y); };
  auto Y2y = [](double y) { return (2 * y - y * y) * std::exp(-y); };
  return {Field::from_function(g, [&](double x, double y) { return Y1(y) * X1(x) + Y2(y) * X2(x); }),
          Field::from_function(g, [&](double x, double y) { return Y1y(y) * X1(x) + Y2y(y) * X2(x); }),
          Field::from_function(g, [&](double x, double y) { return Y1(y) * X1x(x) + Y2(y) * X2x(x); })};
}

inline Field random_smooth(const GridPtr& g, std::mt19937& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double a = U(rng), b = U(rng), c = U(rng), d = 1.0 + U(rng) * 0.5;
  return Field::from_function(g, [=](double x, double y) {
    return (a + b * std::cos(x) + c * std::sin(2 * x)) * std::exp(-y / d) + 0.1 * a * std::cos(y);
  });
}

inline CoefficientFields random_coeffs(const GridPtr& g, std::mt19937& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double a0 = 0.5 * U(rng), b0 = 3.0 * U(rng), s = 0.3 * U(rng);
  CoefficientFields c;
  c.eps = 1e-2;
  c.ap = Field::from_function(g, [=](double x, double y) { return a0 * chi(y) * std::tanh(10 * y) * (1 + s * std::cos(x)); });
  c.bp = Field::from_function(g, [=](double x, double y) { return b0 * 10 * y * std::exp(-100 * y * y) * (1 + s * std::sin(x)); });
  return c;
}

}  // namespace mhdbl::testing
