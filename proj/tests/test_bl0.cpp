#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mhdbl/bl0.hpp"
#include "mhdbl/grid.hpp"
#include "mhdbl/inner0.hpp"
#include "mhdbl/inner_core.hpp"
#include "mhdbl/ops.hpp"

using namespace mhdbl;

namespace {

// x-independent wall traces: ubar(t), hbar(t), zero pressure gradient.
TraceSeries flat_trace(int nx, double T, double dts, double (*ub)(double), double (*hb)(double)) {
  TraceSeries tr(nx);
  int K = static_cast<int>(std::lround(T / dts));
  for (int k = 0; k <= K; ++k) {
    double t = k * dts;
    tr.add_time(t);
    tr.set("u", k, std::vector<double>(nx, ub(t)));
    tr.set("h", k, std::vector<double>(nx, hb(t)));
    tr.set("dx_p", k, std::vector<double>(nx, 0.0));
  }
  return tr;
}

double one(double) { return 1.0; }

double erf_error(int neta, double dt) {
  auto tr = flat_trace(8, 0.5, 0.01, one, one);
  auto g = make_blgrid(8, neta, 30.0);
  BLSolution0 sol = solve_bl0(tr, g, dt, {});
  int K = sol.traj.size() - 1;
  const Field& u = sol.traj.at(K, "up");
  double t = sol.traj.times()[K], err = 0.0;
  for (int j = 0; j < g->ny(); ++j) err = std::max(err, std::abs(u(0, j) - std::erf(g->y(j) / (2.0 * std::sqrt(t)))));
  return err;
}

}  // namespace

TEST_CASE("impulsive wall: erf profile and refinement order") {
  double e1 = erf_error(128, 0.01);
  double e2 = erf_error(256, 0.005);
  double e3 = erf_error(512, 0.0025);
  MESSAGE("erf errors: " << e1 << " " << e2 << " " << e3);
  CHECK(e2 <= 1e-3);
  double p = std::log2(e2 / e3);
  CHECK(p > 1.5);
  CHECK(std::log2(e1 / e2) > 1.5);
}

TEST_CASE("uniform field is preserved") {
  auto tr = flat_trace(8, 0.5, 0.01, [](double) { return 0.0; }, one);
  auto g = make_blgrid(8, 64, 20.0);
  BLSolution0 sol = solve_bl0(tr, g, 0.01, {});
  int K = sol.traj.size() - 1;
  CHECK(linf_norm(sol.traj.at(K, "up")) < 1e-12);
  CHECK(linf_norm(sol.traj.at(K, "hp") - sol.traj.at(0, "hp")) < 1e-12);
}

TEST_CASE("positivity gate aborts with location") {
  auto tr = flat_trace(8, 0.5, 0.01, [](double) { return 0.0; }, [](double t) { return 1.0 - 2.0 * t; });
  auto g = make_blgrid(8, 64, 20.0);
  BLOptions opt;
  opt.delta0 = 1.0;
  bool thrown = false;
  try {
    solve_bl0(tr, g, 0.01, opt);
  } catch (const PositivityViolation& e) {
    thrown = true;
    CHECK(e.h < 0.5);
    CHECK(e.t > 0.2);
    CHECK(e.t < 0.3);
  }
  CHECK(thrown);
}

TEST_CASE("numerical traces: profile identities and consistency") {
  // The g-equation residual is limited by the inner y-resolution of the traces.
  auto gi = make_grid2d(32, 513, 8.0);
  auto s = sample(preset_initial_data(Preset::NumericalInner, {}), gi);
  InnerSolution in = solve_ideal_mhd(s, 0.2, 0.005, {0.01, 4, 1.0});
  TraceSeries tr = extract_trace(in.traj, 4);
  auto gb = make_blgrid(32, 512, 30.0);
  BLSolution0 sol = solve_bl0(tr, gb, 0.005, {});
  for (double m : sol.min_h) CHECK(m >= 0.25);
  BLProfile0 prof = derive_profile0(sol, tr);
  int k = prof.traj.size() - 1;
  // v^p = v_b - vbar_b - eta d_x ubar, exactly for the discrete integrals.
  const Field& vp = sol.traj.at(k, "vp");
  const Field& vb = prof.traj.at(k, "vb0");
  auto vw = prof.wall.at("vb0", k);
  auto dxu = dx_line(tr.at("u", k));
  double d = 0.0;
  for (int j = 0; j < gb->ny(); ++j)
    for (int i = 0; i < 32; ++i) d = std::max(d, std::abs(vp(i, j) - (vb(i, j) - vw[i] - gb->y(j) * dxu[i])));
  CHECK(d < 1e-12);
  // Wall conditions.
  for (int i = 0; i < 32; ++i) {
    CHECK(std::abs(sol.traj.at(k, "up")(i, 0)) < 1e-14);
    CHECK(std::abs(prof.traj.at(k, "ub0")(i, 0) + tr.at("u", k)[i]) < 1e-14);
  }
  auto dh = ddy(sol.traj.at(k, "hp"), 4);
  for (int i = 0; i < 32; ++i) CHECK(std::abs(dh(i, 0)) < 1e-11);
  Profile0Residual r = check_profile0_consistency(prof, tr, {});
  MESSAGE("profile residuals u=" << r.u << " h=" << r.h << " g=" << r.g);
  CHECK(r.u < 5e-3);
  CHECK(r.h < 1e-2);
  CHECK(r.g < 1e-2);
}
