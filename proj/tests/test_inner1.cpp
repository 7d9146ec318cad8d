#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>

#include "mhdbl/grid.hpp"
#include "mhdbl/inner0.hpp"
#include "mhdbl/inner1.hpp"
#include "mhdbl/inner_core.hpp"
#include "mhdbl/ops.hpp"

using namespace mhdbl;

namespace {

using Line = std::function<double(double t, double x)>;

TraceSeries wall_series(int nx, double T, double dts, const Line& v, const Line& g) {
  TraceSeries w(nx);
  int K = static_cast<int>(std::lround(T / dts));
  for (int k = 0; k <= K; ++k) {
    double t = k * dts;
    w.add_time(t);
    std::vector<double> a(nx), b(nx);
    for (int i = 0; i < nx; ++i) {
      double x = 2.0 * M_PI * i / nx;
      a[i] = v(t, x);
      b[i] = g(t, x);
    }
    w.set("v", k, a);
    w.set("g", k, b);
  }
  return w;
}

InnerSolution uniform_background(const GridPtr& g, double c, double T) {
  PresetParams pp;
  pp.h_uniform = c;
  return solve_ideal_mhd(sample(preset_initial_data(Preset::UniformField, pp), g), T, 0.01, {0.01, 4, 1.0});
}

double rel_diff(const Field& a, const Field& b) { return linf_norm(a - b) / std::max(linf_norm(b), 1e-300); }

// Potential Alfven response to the normal wall velocity -t cos x under a
// uniform field (c, 0) and a lid at y = Ly:
//   phi = t cos x C(y), chi = -c t^2/2 sin x C(y), C = cosh(Ly - y)/sinh(Ly),
//   u = grad phi, H = grad chi, p = c d_x chi - phi_t.
struct Alfven {
  double c, Ly;
  double C(double y) const { return std::cosh(Ly - y) / std::sinh(Ly); }
  double Cp(double y) const { return -std::sinh(Ly - y) / std::sinh(Ly); }
  double u(double t, double x, double y) const { return -t * std::sin(x) * C(y); }
  double v(double t, double x, double y) const { return t * std::cos(x) * Cp(y); }
  double h(double t, double x, double y) const { return -0.5 * c * t * t * std::cos(x) * C(y); }
  double g(double t, double x, double y) const { return -0.5 * c * t * t * std::sin(x) * Cp(y); }
  double p(double t, double x, double y) const { return -(1.0 + 0.5 * c * c * t * t) * std::cos(x) * C(y); }
};

struct AlfvenErr {
  double u, v, h, g, p;
};

AlfvenErr alfven_error(int ny) {
  const double T = 0.5, c = 1.0, Ly = 4.0;
  Alfven ex{c, Ly};
  auto g = make_grid2d(16, ny, Ly);
  InnerSolution bg = uniform_background(g, c, T);
  auto w = wall_series(16, T, 0.01, [&](double t, double x) { return ex.v(t, x, 0.0); },
                       [&](double t, double x) { return ex.g(t, x, 0.0); });
  InnerSolution s = solve_linearized_mhd(bg, w, T, 0.0025, {0.01, 4, 1.0});
  int K = s.traj.size() - 1;
  double t = s.traj.times()[K];
  auto ref = [&](double (Alfven::*f)(double, double, double) const) {
    return Field::from_function(g, [&](double x, double y) { return (ex.*f)(t, x, y); });
  };
  return {rel_diff(s.traj.at(K, "u"), ref(&Alfven::u)), rel_diff(s.traj.at(K, "v"), ref(&Alfven::v)),
          rel_diff(s.traj.at(K, "h"), ref(&Alfven::h)), rel_diff(s.traj.at(K, "g"), ref(&Alfven::g)),
          rel_diff(s.traj.at(K, "p"), ref(&Alfven::p))};
}

}  // namespace

TEST_CASE("bc_from_profile0: negated wall integrals") {
  auto g = make_blgrid(16, 1024, 30.0);
  BLProfile0 prof;
  prof.traj = Trajectory(g, {"ub0", "vb0", "hb0", "gb0"});
  Field zero(g);
  prof.traj.push(0.0, {zero, zero, zero, zero});
  Field ub = Field::from_function(g, [](double x, double e) { return std::sin(x) * std::exp(-e); });
  prof.traj.push(0.1, {ub, zero, zero, zero});
  TraceSeries w = bc_from_profile0(prof);
  for (int i = 0; i < 16; ++i) {
    CHECK(w.at("v", 0)[i] == 0.0);
    CHECK(w.at("g", 1)[i] == 0.0);
    CHECK(std::abs(w.at("v", 1)[i] + std::cos(g->x(i))) < 1e-4);
  }
}

TEST_CASE("zero wall data under a uniform field gives the zero solution") {
  auto g = make_grid2d(16, 65, 4.0);
  InnerSolution bg = uniform_background(g, 1.0, 0.2);
  auto w = wall_series(16, 0.2, 0.01, [](double, double) { return 0.0; }, [](double, double) { return 0.0; });
  InnerSolution s = solve_linearized_mhd(bg, w, 0.2, 0.005, {0.01, 4, 1.0});
  for (int k = 0; k < s.traj.size(); ++k)
    for (const char* n : {"u", "v", "h", "g", "p"}) CHECK(linf_norm(s.traj.at(k, n)) <= 1e-12);
}

TEST_CASE("potential Alfven response: exact traces, divergence, convergence") {
  AlfvenErr e1 = alfven_error(65), e2 = alfven_error(129);
  MESSAGE("rel errors ny=65: u " << e1.u << " v " << e1.v << " h " << e1.h << " g " << e1.g << " p " << e1.p);
  MESSAGE("rel errors ny=129: u " << e2.u << " v " << e2.v << " h " << e2.h << " g " << e2.g << " p " << e2.p);
  CHECK(e2.u < 1e-4);
  CHECK(e2.v < 1e-4);
  CHECK(e2.h < 1e-4);
  CHECK(e2.g < 1e-4);
  CHECK(e2.p < 1e-3);
  CHECK(e1.u / e2.u > 8.0);
  CHECK(e1.h / e2.h > 4.0);
}

TEST_CASE("numerical background: wall trace, divergence, linearity, superposition") {
  auto g = make_grid2d(32, 129, 8.0);
  const double T = 0.2;
  InnerSolution bg = solve_ideal_mhd(sample(preset_initial_data(Preset::NumericalInner, {}), g), T, 0.005, {});
  Line v1 = [](double t, double x) { return -t * std::cos(x); };
  Line g1 = [](double t, double x) { return t * t * std::sin(2.0 * x); };
  Line v2 = [](double t, double x) { return t * t * std::sin(3.0 * x); };
  Line z = [](double, double) { return 0.0; };
  auto solve = [&](const Line& v, const Line& gg) {
    return solve_linearized_mhd(bg, wall_series(32, T, 0.01, v, gg), T, 0.005, {});
  };
  InnerSolution a = solve(v1, g1), b = solve(v2, z);
  InnerSolution ab = solve([&](double t, double x) { return v1(t, x) + v2(t, x); }, g1);
  InnerSolution a2 = solve([&](double t, double x) { return -v1(t, x); }, [&](double t, double x) { return -g1(t, x); });
  int K = a.traj.size() - 1;
  for (int i = 0; i < 32; ++i) {
    double x = g->x(i), t = a.traj.times()[K];
    CHECK(std::abs(a.traj.at(K, "v")(i, 0) - v1(t, x)) < 1e-10);
    CHECK(std::abs(a.traj.at(K, "g")(i, 0) - g1(t, x)) < 1e-10);
  }
  for (int k = 0; k <= K; ++k) {
    CHECK(linf_norm(divergence(a.traj.at(k, "u"), a.traj.at(k, "v"), 4)) < 1e-11);
    CHECK(linf_norm(divergence(a.traj.at(k, "h"), a.traj.at(k, "g"), 4)) < 1e-11);
  }
  for (const char* n : {"u", "v", "h", "g", "p"}) {
    Field sum = a.traj.at(K, n) + b.traj.at(K, n);
    CHECK(rel_diff(ab.traj.at(K, n), sum) < 1e-10);
    CHECK(rel_diff(a2.traj.at(K, n), -1.0 * a.traj.at(K, n)) < 1e-10);
  }
  CHECK(linf_norm(a.traj.at(0, "u")) == 0.0);
  CHECK(linf_norm(a.traj.at(0, "h")) == 0.0);
}
