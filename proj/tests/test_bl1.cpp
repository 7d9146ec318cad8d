#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>
#include <map>

#include "mhdbl/bl0.hpp"
#include "mhdbl/bl1.hpp"
#include "mhdbl/cutoff.hpp"
#include "mhdbl/grid.hpp"
#include "mhdbl/inner0.hpp"
#include "mhdbl/inner1.hpp"
#include "mhdbl/inner_core.hpp"
#include "mhdbl/ops.hpp"

using namespace mhdbl;

namespace {

using Line = std::function<double(double, double)>;
using Prof = std::function<double(double, double, double)>;

const std::vector<std::string> kChannels = {"u",    "v",    "h",    "g",     "dy_u",  "dy_v",  "dy_h",
                                            "dy_g", "dyy_u", "dyy_v", "dyy_h", "dyy_g", "p", "dx_p", "dy_p"};

TraceSeries series(int nx, const std::vector<double>& times, const std::map<std::string, Line>& chans) {
  TraceSeries tr(nx);
  for (std::size_t k = 0; k < times.size(); ++k) {
    tr.add_time(times[k]);
    for (const auto& c : kChannels) {
      std::vector<double> v(nx, 0.0);
      auto it = chans.find(c);
      if (it != chans.end())
        for (int i = 0; i < nx; ++i) v[i] = it->second(times[k], 2.0 * M_PI * i / nx);
      tr.set(c, static_cast<int>(k), v);
    }
  }
  return tr;
}

BLProfile0 profile(const GridPtr& g, const std::vector<double>& times, const std::map<std::string, Prof>& f) {
  BLProfile0 p;
  p.traj = Trajectory(g, {"ub0", "vb0", "hb0", "gb0"});
  p.wall = TraceSeries(g->nx());
  for (std::size_t k = 0; k < times.size(); ++k) {
    std::vector<Field> fs;
    for (const char* n : {"ub0", "vb0", "hb0", "gb0"}) {
      auto it = f.find(n);
      double t = times[k];
      fs.push_back(it == f.end() ? Field(g)
                                 : Field::from_function(g, [&](double x, double e) { return it->second(t, x, e); }));
    }
    p.wall.add_time(times[k]);
    p.wall.set("vb0", static_cast<int>(k), row_of(fs[1], 0));
    p.wall.set("gb0", static_cast<int>(k), row_of(fs[3], 0));
    p.traj.push(times[k], std::move(fs));
  }
  return p;
}

std::vector<double> uniform_times(double T, double dts) {
  std::vector<double> t;
  int K = static_cast<int>(std::lround(T / dts));
  for (int k = 0; k <= K; ++k) t.push_back(k * dts);
  return t;
}

double pressure_defect(int neta) {
  auto g = make_blgrid(8, neta, 30.0);
  auto ts = uniform_times(0.2, 0.1);
  BLProfile0 p = profile(g, ts,
                         {{"ub0", [](double, double x, double e) { return std::sin(x) * e * std::exp(-e); }},
                          {"vb0", [](double t, double x, double e) { return (1.0 + t) * std::cos(x) * std::exp(-e); }},
                          {"hb0", [](double, double x, double e) { return 0.5 * std::cos(x) * std::exp(-2.0 * e); }},
                          {"gb0", [](double, double x, double e) { return std::sin(x) * std::exp(-e); }}});
  auto t0 = series(8, ts, {{"u", [](double, double x) { return 0.3 * std::sin(x); }},
                           {"h", [](double, double) { return 1.0; }},
                           {"dy_v", [](double, double x) { return std::cos(x); }},
                           {"dy_g", [](double, double x) { return 0.2 * std::sin(x); }}});
  auto t1 = series(8, ts, {{"v", [](double, double x) { return 0.1 * std::cos(x); }}});
  PressureBL pb = pressure_corrector(p, t0, t1, 1.0);
  double d = 0.0;
  for (int k = 0; k < pb.traj.size(); ++k)
    d = std::max(d, linf_norm(ddy(pb.traj.at(k, "pb1"), 4) - pb.traj.at(k, "dpb1")));
  return d;
}

}  // namespace

TEST_CASE("pressure corrector: zero data and the stationary exponential") {
  auto g = make_blgrid(8, 512, 30.0);
  auto ts = uniform_times(0.2, 0.1);
  auto t0 = series(8, ts, {{"h", [](double, double) { return 1.0; }}});
  auto t1 = series(8, ts, {});
  PressureBL z = pressure_corrector(profile(g, ts, {}), t0, t1, 1.0);
  for (int k = 0; k < z.traj.size(); ++k) CHECK(linf_norm(z.traj.at(k, "pb1")) == 0.0);
  PressureBL pb = pressure_corrector(profile(g, ts, {{"vb0", [](double, double, double e) { return std::exp(-e); }}}),
                                     t0, t1, 1.0);
  Field ref = Field::from_function(g, [](double, double e) { return -0.5 * std::exp(-2.0 * e) - std::exp(-e); });
  CHECK(linf_norm(pb.traj.at(1, "pb1") - ref) < 1e-5);
  Field dref = Field::from_function(g, [](double, double e) { return std::exp(-2.0 * e) + std::exp(-e); });
  CHECK(linf_norm(pb.traj.at(1, "dpb1") - dref) < 5e-5);
  TraceSeries missing(8);
  CHECK_THROWS_WITH_AS(pressure_corrector(profile(g, ts, {}), missing, t1, 1.0), doctest::Contains("dy_v"),
                       std::runtime_error);
}

TEST_CASE("pressure corrector: quadrature defect is second order") {
  double d1 = pressure_defect(256), d2 = pressure_defect(512);
  MESSAGE("defects " << d1 << " " << d2 << " ratio " << d1 / d2);
  CHECK(d1 / d2 > 3.2);
  CHECK(d1 / d2 < 4.8);
}

TEST_CASE("first-order layer: zero data gives zero") {
  auto g = make_blgrid(8, 128, 20.0);
  auto ts = uniform_times(0.2, 0.01);
  auto t0 = series(8, ts, {{"h", [](double, double) { return 1.0; }}});
  BLProfile1 p = solve_bl1(profile(g, ts, {}), t0, series(8, ts, {}), 0.01);
  for (int k = 0; k < p.traj.size(); ++k)
    for (const char* n : {"ub1", "vb1", "hb1", "gb1"}) CHECK(linf_norm(p.traj.at(k, n)) == 0.0);
}

TEST_CASE("first-order layer: impulsive wall slip gives the heat kernel") {
  const double U1 = 0.7;
  auto g = make_blgrid(8, 256, 30.0);
  auto ts = uniform_times(0.5, 0.01);
  auto t0 = series(8, ts, {{"h", [](double, double) { return 1.0; }}});
  auto t1 = series(8, ts, {{"u", [&](double, double) { return U1; }}});
  BLProfile1 p = solve_bl1(profile(g, ts, {}), t0, t1, 0.005);
  int K = p.traj.size() - 1;
  double t = p.traj.times()[K], err = 0.0;
  const Field& u = p.traj.at(K, "ub1");
  for (int j = 0; j < g->ny(); ++j)
    err = std::max(err, std::abs(u(3, j) + U1 * std::erfc(g->y(j) / (2.0 * std::sqrt(t)))));
  MESSAGE("heat kernel error " << err);
  CHECK(err < 1e-3);
  CHECK(linf_norm(p.traj.at(K, "hb1")) == 0.0);
  CHECK(p.far_field < 1e-10);
}

TEST_CASE("first-order layer: linearity and superposition in the wall data") {
  auto g = make_blgrid(16, 128, 20.0);
  auto ts = uniform_times(0.2, 0.01);
  Line u0 = [](double, double x) { return 0.3 * std::sin(x); };
  Line h0 = [](double, double x) { return 1.0 + 0.2 * std::cos(x); };
  auto solve = [&](double a, double b) {
    auto t0 = series(16, ts, {{"u", u0}, {"h", h0}, {"dy_h", [&](double t, double x) { return b * t * std::sin(2 * x); }}});
    auto t1 = series(16, ts, {{"u", [&](double t, double x) { return a * t * std::cos(x); }}});
    return solve_bl1(profile(g, ts, {}), t0, t1, 0.005);
  };
  BLProfile1 p1 = solve(1.0, 0.0), p2 = solve(0.0, 1.0), p12 = solve(1.0, 1.0), pm = solve(-2.0, 0.0);
  int K = p1.traj.size() - 1;
  for (const char* n : {"ub1", "hb1", "vb1", "gb1"}) {
    Field sum = p1.traj.at(K, n) + p2.traj.at(K, n);
    double s = std::max(linf_norm(sum), 1e-300);
    CHECK(linf_norm(p12.traj.at(K, n) - sum) / s < 1e-10);
    CHECK(linf_norm(pm.traj.at(K, n) + 2.0 * p1.traj.at(K, n)) / std::max(linf_norm(pm.traj.at(K, n)), 1e-300) < 1e-10);
  }
  // Neumann wall data and divergence of the layer pair.
  auto dh = ddy(p2.traj.at(K, "hb1"), 4);
  double t = p2.traj.times()[K];
  for (int i = 0; i < 16; ++i) CHECK(std::abs(dh(i, 0) + t * std::sin(2 * g->x(i))) < 1e-11);
  for (int i = 0; i < 16; ++i) CHECK(std::abs(p1.traj.at(K, "ub1")(i, 0) + t * std::cos(g->x(i))) < 1e-14);
  // Divergence in the trapezoid form used to build vb1.
  Field ux = ddx(p12.traj.at(K, "ub1"));
  const Field& v = p12.traj.at(K, "vb1");
  double div = 0.0;
  for (int j = 1; j < g->ny(); ++j)
    for (int i = 0; i < 16; ++i)
      div = std::max(div, std::abs((v(i, j) - v(i, j - 1)) / (g->y(j) - g->y(j - 1)) + 0.5 * (ux(i, j) + ux(i, j - 1))));
  CHECK(div < 1e-10 * std::max(1.0, linf_norm(ux)));
}

TEST_CASE("magnetic wall corrector") {
  auto g = make_blgrid(16, 512, 30.0);
  auto ts = uniform_times(0.2, 0.1);
  auto zero = series(16, ts, {});
  RhoCorrector z = boundary_corrector_rho(zero, g);
  for (int k = 0; k < z.traj.size(); ++k) CHECK(linf_norm(z.traj.at(k, "rho")) == 0.0);
  const double c = 0.8;
  auto tc = series(16, ts, {{"dy_h", [&](double t, double) { return t > 0 ? c : 0.0; }}});
  RhoCorrector r = boundary_corrector_rho(tc, g);
  CHECK(linf_norm(r.traj.at(0, "rho")) == 0.0);
  auto d = ddy(r.traj.at(1, "rho"), 4);
  for (int i = 0; i < 16; ++i) CHECK(std::abs(d(i, 0) + c) < 1e-12);
  auto tcos = series(16, ts, {{"dy_h", [](double, double x) { return std::cos(x); }}});
  RhoCorrector rc = boundary_corrector_rho(tcos, g);
  // Oracle: composite Simpson of s chi(s).
  const Field& dR = rc.traj.at(1, "dxRh");
  for (int j = 0; j < g->ny(); j += 37) {
    double e = g->y(j), q = 0.0;
    const int n = 20000;
    for (int m = 0; m < n; ++m) {
      double a = e * m / n, b = e * (m + 1) / n, c = 0.5 * (a + b);
      q += (b - a) / 6.0 * (a * chi(a) + 4.0 * c * chi(c) + b * chi(b));
    }
    for (int i = 0; i < 16; ++i) CHECK(std::abs(dR(i, j) - std::sin(g->x(i)) * q) < 1e-8);
  }
}

TEST_CASE("pipeline: first-order layer residual shrinks under refinement") {
  auto gi = make_grid2d(32, 257, 8.0);
  const double T = 0.3;
  InnerSolution in0 = solve_ideal_mhd(sample(preset_initial_data(Preset::NumericalInner, {}), gi), T, 0.005, {});
  TraceSeries tr0 = extract_trace(in0.traj, 4);
  auto run = [&](int neta, double dt) {
    auto gb = make_blgrid(32, neta, 30.0);
    BLProfile0 p0 = derive_profile0(solve_bl0(tr0, gb, dt, {}), tr0);
    InnerSolution in1 = solve_linearized_mhd(in0, bc_from_profile0(p0), T, 0.005, {});
    TraceSeries tr1 = extract_trace(in1.traj, 4);
    BLProfile1 p1 = solve_bl1(p0, tr0, tr1, dt, {});
    return check_profile1_consistency(p1, p0, tr0, tr1, {}, 0.1);
  };
  Profile1Residual a = run(256, 0.01), b = run(512, 0.005);
  MESSAGE("residuals coarse u=" << a.u << " h=" << a.h << ", fine u=" << b.u << " h=" << b.h);
  CHECK(b.u < a.u);
  CHECK(b.h < a.h);
  CHECK(b.u < 2e-2);
  CHECK(b.h < 2e-2);
}
