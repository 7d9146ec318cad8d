#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "mhdbl/mhdb.hpp"
#include "mhdbl/ops.hpp"
#include "mhdbl/study.hpp"

using namespace mhdbl;
namespace fs = std::filesystem;

namespace {

StudyConfig parse(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

/// Small grids and a short window so a pipeline runs in about a second.
StudyConfig small_config(Preset p) {
  StudyConfig c;
  c.preset = p;
  c.eps_list = {1e-2, std::pow(10.0, -2.5), 1e-3};
  c.nx = 8;
  c.inner_ny = 65;
  c.bl_neta = 128;
  c.assembly_ny = 97;
  c.t_final = 0.04;
  c.dt = 0.005;
  c.dt_snap = 0.01;
  return c;
}

fs::path scratch(const std::string& name) {
  auto d = fs::temp_directory_path() / ("mhdbl_study_" + name);
  fs::remove_all(d);
  return d;
}

std::vector<double> powers(const std::vector<double>& eps, double c, double p) {
  std::vector<double> e;
  for (double x : eps) e.push_back(c * std::pow(x, p));
  return e;
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("defaults") {
    StudyConfig c;
    REQUIRE(c.eps_list.size() == 4);
    CHECK(c.eps_list[1] == std::pow(10.0, -2.5));
    CHECK_NOTHROW(validate(c));
  }
  SUBCASE("keys, comments and the 10^p form") {
    auto c = parse("# sweep\npreset = uniform_field\neps_list = 1e-2, 10^-3  # two values\nmu = 2\nnx = 16\n"
                   "dump_fields = true\nh_uniform = 1.5\n");
    CHECK(c.preset == Preset::UniformField);
    REQUIRE(c.eps_list.size() == 2);
    CHECK(c.eps_list[1] == std::pow(10.0, -3.0));
    CHECK(c.mu == 2.0);
    CHECK(c.nx == 16);
    CHECK(c.dump_fields);
    CHECK(c.preset_params.h_uniform == 1.5);
  }
  SUBCASE("errors carry the line number") {
    auto bad = [](const std::string& text, const std::string& needle) {
      try {
        parse(text);
      } catch (const std::invalid_argument& e) {
        CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos, e.what());
        return;
      }
      FAIL("no exception for: " << text);
    };
    bad("mu = 1\nviscosity = 2\n", "line 2: unknown key 'viscosity'");
    bad("mu = 1\nmu = 2\n", "duplicate key 'mu'");
    bad("nx 16\n", "line 1");
    bad("nx = 16.5\n", "not an integer");
    bad("dump_fields = yes\n", "not a boolean");
    bad("eps_list = 1e-3, 1e-2\n", "strictly decreasing");
    bad("eps_list = 2\n", "(0, 1]");
    bad("t_final = 0\n", "t_final");
    bad("preset = vortex\n", "vortex");
  }
  SUBCASE("text round trip") {
    auto c = parse("preset = stationary_shear\neps_list = 10^-2, 10^-2.25, 10^-2.5\nkappa = 0.7\ndt = 0.00125\n");
    auto text = to_config_text(c);
    auto d = parse(text);
    CHECK(to_config_text(d) == text);
    CHECK(d.eps_list == c.eps_list);
    CHECK(d.kappa == c.kappa);
    CHECK(d.dt == c.dt);
  }
}

TEST_CASE("fit_rate") {
  const std::vector<double> eps = {1e-2, std::pow(10.0, -2.5), 1e-3, std::pow(10.0, -3.5)};
  SUBCASE("exact power law") {
    auto f = fit_rate(eps, powers(eps, 2.0, 0.375));
    CHECK(f.slope == doctest::Approx(0.375).epsilon(1e-10));
    CHECK(f.intercept == doctest::Approx(std::log(2.0)).epsilon(1e-10));
    CHECK(f.ci95 <= 1e-10);
    CHECK(f.n_points == 4);
  }
  SUBCASE("constant errors") {
    auto f = fit_rate(eps, {0.3, 0.3, 0.3, 0.3});
    CHECK(std::abs(f.slope) <= 1e-10);
  }
  SUBCASE("scale equivariance") {
    std::vector<double> err = {0.11, 0.073, 0.052, 0.031};
    auto f = fit_rate(eps, err);
    for (double c : {1e-6, 0.5, 7.0, 1e5}) {
      std::vector<double> s;
      for (double e : err) s.push_back(c * e);
      auto g = fit_rate(eps, s);
      CHECK(std::abs(g.slope - f.slope) <= 1e-12);
      CHECK(g.intercept == doctest::Approx(f.intercept + std::log(c)).epsilon(1e-12));
    }
  }
  SUBCASE("5% multiplicative noise") {
    // slope standard deviation 0.05 / sqrt(sum (log eps - mean)^2) = 0.0194 on
    // this eps set, so [0.33, 0.42] is +-2.3 sigma: about 98% of trials
    std::mt19937_64 rng(20240917);
    std::normal_distribution<double> N(0.0, 0.05);
    int inside = 0;
    const int trials = 4000;
    double mean = 0.0;
    for (int n = 0; n < trials; ++n) {
      auto err = powers(eps, 1.0, 0.375);
      for (double& e : err) e *= std::exp(N(rng));
      double s = fit_rate(eps, err).slope;
      mean += s / trials;
      inside += (s >= 0.33 && s <= 0.42);
    }
    CHECK(static_cast<double>(inside) / trials >= 0.96);
    CHECK(mean == doctest::Approx(0.375).epsilon(2e-3));
  }
  SUBCASE("confidence interval covers the true slope") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> N(0.0, 0.05);
    int covered = 0;
    const int trials = 4000;
    for (int n = 0; n < trials; ++n) {
      auto err = powers(eps, 1.0, 0.375);
      for (double& e : err) e *= std::exp(N(rng));
      auto f = fit_rate(eps, err);
      covered += std::abs(f.slope - 0.375) <= f.ci95;
    }
    CHECK(static_cast<double>(covered) / trials == doctest::Approx(0.95).epsilon(0.02));
  }
  SUBCASE("unusable points") {
    auto f = fit_rate(eps, {0.1, -1.0, 0.05, 0.03});
    CHECK(f.n_points == 3);
    CHECK_THROWS_AS(fit_rate(eps, {0.1, 0.0, -1.0, 0.03}), std::invalid_argument);
    CHECK_THROWS_AS(fit_rate({1e-2, 1e-3}, {0.1, 0.05}), std::invalid_argument);
    CHECK_THROWS_AS(fit_rate(eps, {0.1, 0.05}), std::invalid_argument);
  }
}

TEST_CASE("emit_report") {
  auto dir = scratch("report");
  SUBCASE("no data") {
    try {
      emit_report({}, dir);
      FAIL("expected a throw");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()) == "no data");
    }
  }
  SUBCASE("csv round trip and dumps") {
    ConvergenceReport rep;
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto g = make_grid2d(8, 17, 2.0);
    for (double e : {1e-2, std::pow(10.0, -2.5), 1e-3}) {
      ConvergenceRow r;
      r.eps = e;
      r.linf_error = std::pow(e, 0.4) * (1.0 + 0.1 * U(rng));
      r.l2_error = 0.1 / 3.0 * U(rng);
      for (auto& v : r.linf_c) v = U(rng) / 7.0;
      for (auto& v : r.r_l2) v = e * U(rng);
      r.walltime_s = 1.0 / 3.0;
      rep.rows.push_back(r);
      rep.error_fields.push_back(Field::from_function(g, [e](double x, double y) { return e * std::sin(x) * y; }));
    }
    rep.metadata = to_config_text(StudyConfig{});
    emit_report(rep, dir, true);
    auto back = read_convergence_csv(dir / "convergence.csv");
    REQUIRE(back.size() == 3);
    for (int n = 0; n < 3; ++n) {
      CHECK(std::memcmp(&back[n].eps, &rep.rows[n].eps, sizeof(double)) == 0);
      CHECK(back[n].linf_error == rep.rows[n].linf_error);
      CHECK(back[n].l2_error == rep.rows[n].l2_error);
      CHECK(back[n].linf_c == rep.rows[n].linf_c);
      CHECK(back[n].r_l2 == rep.rows[n].r_l2);
      CHECK(back[n].walltime_s == rep.rows[n].walltime_s);
    }
    std::ifstream rate(dir / "rate.txt");
    std::string all((std::istreambuf_iterator<char>(rate)), {});
    CHECK(all.find("slope = ") != std::string::npos);
    CHECK(all.find("ci95 = ") != std::string::npos);
    CHECK(all.find("n_points = 3") != std::string::npos);
    CHECK(fs::exists(dir / "config.txt"));
    for (int n = 0; n < 3; ++n) {
      auto path = dir / ("error_" + std::to_string(n) + ".mhdb");
      REQUIRE(fs::exists(path));
      std::ifstream is(path, std::ios::binary);
      char magic[4];
      is.read(magic, 4);
      CHECK(std::string(magic, 4) == "MHDB");
      CHECK(linf_norm(read_mhdb(path) - rep.error_fields[n]) == 0.0);
    }
  }
  SUBCASE("monotonicity") {
    std::vector<ConvergenceRow> rows(3);
    rows[0].linf_error = 0.3;
    rows[1].linf_error = 0.2;
    rows[2].linf_error = 0.1;
    CHECK(monotone_decreasing(rows));
    rows[2].linf_error = 0.2;
    CHECK_FALSE(monotone_decreasing(rows));
  }
  fs::remove_all(dir);
}

TEST_CASE("uniform field pipeline is exact on both sides") {
  auto c = small_config(Preset::UniformField);
  auto stages = run_stages(c);
  for (double eps : c.eps_list) {
    auto r = run_pipeline(c, stages, eps);
    CHECK(r.error.linf <= 1e-10);
    CHECK(r.error.l2 <= 1e-10);
    for (double v : r.remainder_l2) CHECK(v <= 1e-8);
  }
}

TEST_CASE("stage failures carry the stage tag") {
  auto c = small_config(Preset::NumericalInner);
  c.delta0 = 10.0;  // positivity gate delta0/2 cannot hold
  try {
    run_stages(c);
    FAIL("expected a stage error");
  } catch (const StageError& e) {
    CHECK(e.stage == "bl0");
    REQUIRE(e.partial);
    CHECK(e.partial->inner0.traj.size() > 0);
  }
}

TEST_CASE("sweep is deterministic and independent of the worker count") {
  auto c = small_config(Preset::NumericalInner);
  auto a = run_study(c, 1), b = run_study(c, 3);
  REQUIRE(a.rows.size() == 3);
  REQUIRE(b.rows.size() == 3);
  for (int n = 0; n < 3; ++n) {
    CHECK(a.rows[n].eps == b.rows[n].eps);
    CHECK(a.rows[n].linf_error == b.rows[n].linf_error);
    CHECK(a.rows[n].l2_error == b.rows[n].l2_error);
    CHECK(a.rows[n].linf_c == b.rows[n].linf_c);
    CHECK(a.rows[n].r_l2 == b.rows[n].r_l2);
    CHECK(linf_norm(a.error_fields[n] - b.error_fields[n]) == 0.0);
    CHECK(a.rows[n].linf_error > 0.0);
  }
  CHECK(a.metadata == to_config_text(c));
}
