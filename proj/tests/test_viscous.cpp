#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mhdbl/ops.hpp"
#include "viscous_cases.hpp"

using namespace mhdbl;

namespace {

ViscousParams params(double eps, double T, double dt, double dt_snap) {
  ViscousParams p;
  p.eps = eps;
  p.T = T;
  p.dt = dt;
  p.dt_snap = dt_snap;
  return p;
}

double max_drift(const ViscousSolution& s, const VectorState& init) {
  double m = 0.0;
  for (int k = 0; k < s.traj.size(); ++k) {
    m = std::max({m, linf_norm(s.traj.at(k, "u") - init.u), linf_norm(s.traj.at(k, "v") - init.v),
                  linf_norm(s.traj.at(k, "h") - init.h), linf_norm(s.traj.at(k, "g") - init.g)});
  }
  return m;
}

double max_abs(const std::vector<double>& r) {
  double m = 0.0;
  for (double v : r) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("uniform tangential field is an equilibrium") {
  auto g = make_clustered_grid(16, 129, 8.0, 0.025);
  VectorState s{Field(g), Field(g), Field::from_function(g, [](double, double) { return 1.0; }), Field(g), std::nullopt};
  auto sol = solve_viscous_mhd(s, params(1e-2, 0.5, 0.01, 0.05));
  CHECK(sol.traj.size() == 11);
  CHECK(max_drift(sol, s) <= 1e-10);
  CHECK(std::abs(sol.energy.back() - sol.energy.front()) <= 1e-10 * sol.energy.front());
}

TEST_CASE("zero data stays zero") {
  auto g = make_clustered_grid(16, 65, 8.0, 0.025);
  VectorState s{Field(g), Field(g), Field(g), Field(g), std::nullopt};
  auto sol = solve_viscous_mhd(s, params(1e-2, 0.1, 0.01, 0.05));
  CHECK(max_drift(sol, s) == 0.0);
  auto b = energy_budget(sol.traj, params(1e-2, 0.1, 0.01, 0.05));
  CHECK(b.max_relative == 0.0);
}

TEST_CASE("wall conditions and divergence hold at every snapshot") {
  auto g = make_clustered_grid(16, 257, 8.0, 0.025);
  auto sol = solve_viscous_mhd(testing::shear_data(g, 0.3, 0.25), params(1e-2, 0.2, 0.01, 0.05));
  const int N = g->ny() - 1;
  for (int k = 1; k < sol.traj.size(); ++k) {
    CAPTURE(k);
    Field u = sol.traj.at(k, "u"), v = sol.traj.at(k, "v"), h = sol.traj.at(k, "h"), gg = sol.traj.at(k, "g");
    Field dyh = ddy(h, 4), om = sol.traj.at(k, "omega");
    for (int i = 0; i < g->nx(); ++i) {
      CHECK(std::abs(u(i, 0)) <= 1e-10);
      CHECK(std::abs(v(i, 0)) <= 1e-10);
      CHECK(std::abs(gg(i, 0)) <= 1e-10);
      CHECK(std::abs(dyh(i, 0)) <= 1e-10);
      CHECK(std::abs(v(i, N)) <= 1e-10);
      CHECK(std::abs(gg(i, N)) <= 1e-10);
      CHECK(std::abs(om(i, N)) <= 1e-10);
      CHECK(std::abs(dyh(i, N)) <= 1e-10);
    }
    CHECK(linf_norm(divergence(u, v, 4)) <= 1e-10);
    CHECK(linf_norm(divergence(h, gg, 4)) <= 1e-10);
  }
}

TEST_CASE("under-resolved wall layer is rejected") {
  auto g = make_grid2d(16, 65, 8.0);
  VectorState s{Field(g), Field(g), Field(g), Field(g), std::nullopt};
  CHECK_THROWS_AS(check_layer_gate(*g, params(1e-3, 0.1, 0.01, 0.05)), std::invalid_argument);
  CHECK_THROWS_AS(solve_viscous_mhd(s, params(1e-3, 0.1, 0.01, 0.05)), std::invalid_argument);
  auto c = make_clustered_grid(16, 129, 8.0, 0.25 * std::sqrt(1e-3));
  CHECK_NOTHROW(check_layer_gate(*c, params(1e-3, 0.1, 0.01, 0.05)));
  CHECK_THROWS_AS(check_layer_gate(*c, params(0.0, 0.1, 0.01, 0.05)), std::invalid_argument);
}

TEST_CASE("advective step limit is enforced") {
  auto g = make_clustered_grid(16, 65, 8.0, 0.025);
  VectorState s = testing::shear_data(g, 0.3, 0.25);
  s.u = s.u * 40.0;
  s.v = s.v * 40.0;
  CHECK_THROWS_AS(solve_viscous_mhd(s, params(1e-2, 0.4, 0.2, 0.2)), std::runtime_error);
}

TEST_CASE("energy decays and the budget closes at second order in time") {
  const double eps = 1e-2;
  auto g = make_clustered_grid(16, 257, 8.0, 0.025);
  VectorState s = testing::compatible_shear_data(g, eps, 0.3, 0.25, 0.2);
  std::vector<double> rT;
  std::vector<Field> uT;
  for (double dt : {0.005, 0.0025, 0.00125}) {
    auto p = params(eps, 0.32, dt, dt);
    auto sol = solve_viscous_mhd(s, p);
    for (std::size_t k = 1; k < sol.energy.size(); ++k) CHECK(sol.energy[k] <= sol.energy[k - 1]);
    auto b = energy_budget(sol.traj, p);
    CAPTURE(dt);
    CHECK(b.dissipative);
    CHECK(b.max_relative <= 1e-4);
    CHECK(max_abs(b.residual) <= 1e-4 * b.dissipated.back());
    rT.push_back(b.residual.back());
    uT.push_back(sol.traj.at(sol.traj.size() - 1, "u"));
  }
  // dt-independent spatial error cancels in the differences
  double p_budget = std::log2((rT[0] - rT[1]) / (rT[1] - rT[2]));
  double p_sol = std::log2(linf_norm(uT[0] - uT[1]) / linf_norm(uT[1] - uT[2]));
  CHECK(p_budget == doctest::Approx(2.0).epsilon(0.1));
  CHECK(p_sol == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("energy budget input checks") {
  auto g = make_clustered_grid(16, 65, 8.0, 0.025);
  VectorState s{Field(g), Field(g), Field(g), Field(g), std::nullopt};
  auto p = params(1e-2, 0.1, 0.01, 0.05);
  Trajectory two(g, {"u", "v", "h", "g"});
  two.push(0.0, {s.u, s.v, s.h, s.g});
  two.push(0.1, {s.u, s.v, s.h, s.g});
  CHECK_THROWS_AS(energy_budget(two, p), std::invalid_argument);
  two.push(0.3, {s.u, s.v, s.h, s.g});
  CHECK_THROWS_AS(energy_budget(two, p), std::invalid_argument);
}
