// Command-line driver: runs pipeline stages, the viscous solve, diagnostics
// and the eps-sweep study from a config file.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "mhdbl/diagnostics.hpp"
#include "mhdbl/inner1.hpp"
#include "mhdbl/mhdb.hpp"
#include "mhdbl/study.hpp"

namespace fs = std::filesystem;
using namespace mhdbl;

namespace {

struct Globals {
  std::string config;
  std::string out;
  int jobs = 1;
  std::uint64_t seed = 0;
};

StudyConfig load(const Globals& g) {
  StudyConfig c = g.config.empty() ? StudyConfig{} : load_config(g.config);
  if (!g.out.empty()) c.out_dir = g.out;
  validate(c);
  return c;
}

fs::path prepare(const StudyConfig& c, const std::string& sub) {
  fs::path dir = fs::path(c.out_dir) / sub;
  fs::create_directories(dir);
  std::ofstream(dir / "config.txt") << to_config_text(c);
  return dir;
}

void write_series(const fs::path& path, const std::string& header, const std::vector<double>& t,
                  const std::vector<double>& v) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os << "time," << header << "\n" << std::setprecision(17);
  for (std::size_t k = 0; k < t.size(); ++k) os << t[k] << ',' << v[k] << "\n";
}

InnerOptions inner_opts(const StudyConfig& c) {
  InnerOptions o;
  o.dt_snap = c.dt_snap;
  o.order = c.order;
  return o;
}

BLOptions bl_opts(const StudyConfig& c) {
  BLOptions o;
  o.mu = c.mu;
  o.kappa = c.kappa;
  o.delta0 = c.delta0;
  o.order = c.order;
  return o;
}

InnerSolution run_inner0(const StudyConfig& c) {
  auto g = make_grid2d(c.nx, c.inner_ny, c.ly);
  return solve_ideal_mhd(sample(preset_initial_data(c.preset, c.preset_params), g), c.t_final, c.dt, inner_opts(c));
}

void cmd_inner0(const StudyConfig& c) {
  auto dir = prepare(c, "inner0");
  auto in = run_inner0(c);
  in.traj.save(dir, "inner0");
  write_series(dir / "energy.csv", "energy", in.traj.times(), in.energy);
  spdlog::info("inner0: {} snapshots, max courant {:.3f}", in.traj.size(), in.max_courant);
}

void cmd_bl0(const StudyConfig& c) {
  auto dir = prepare(c, "bl0");
  auto in = run_inner0(c);
  auto bl = solve_bl0(extract_trace(in.traj, c.order), make_blgrid(c.nx, c.bl_neta, c.bl_leta), c.dt, bl_opts(c));
  bl.traj.save(dir, "bl0");
  write_series(dir / "min_h.csv", "min_h", bl.traj.times(), bl.min_h);
  spdlog::info("bl0: min h^p {:.6f} (gate {:.6f})", *std::min_element(bl.min_h.begin(), bl.min_h.end()),
               0.5 * c.delta0);
}

void cmd_stages(const StudyConfig& c, const std::string& which) {
  auto dir = prepare(c, which);
  auto st = run_stages(c);
  if (which == "inner1") {
    st.parts->inner1.traj.save(dir, "inner1");
  } else {
    st.parts->profile1.traj.save(dir, "bl1");
    st.parts->pressure.traj.save(dir, "pressure");
    spdlog::info("bl1: far-field |ub1| {:.3e}", st.parts->profile1.far_field);
  }
}

void cmd_assemble(const StudyConfig& c) {
  auto dir = prepare(c, "assemble");
  auto st = run_stages(c);
  std::ofstream os(dir / "structure.csv");
  os << "eps,wall_u,wall_v,wall_dyh,wall_g,div_u,div_h,r1_mismatch,r2_mismatch,r3_mismatch,r4_mismatch\n" << std::setprecision(17);
  for (std::size_t n = 0; n < c.eps_list.size(); ++n) {
    double eps = c.eps_list[n];
    ApproxSolution a(eps, st.parts, assembly_grid(eps, c.nx, c.assembly_ny, c.ly, c.points_per_layer));
    const int K = a.size();
    std::vector<int> snaps;
    for (int k = 1; k + 1 < K; ++k) snaps.push_back(k);
    write_remainder_csv(remainder_norms(a, c.mu, c.kappa, snaps, c.remainder_orders),
                        dir / ("remainder_" + std::to_string(n) + ".csv"));
    auto s = check_structure(a, K - 1);
    auto d = check_direct_fd(a, K / 2, c.mu, c.kappa);
    os << eps << ',' << s.wall_u << ',' << s.wall_v << ',' << s.wall_dyh << ',' << s.wall_g << ',' << s.div_u << ','
       << s.div_h;
    for (double m : d.mismatch) os << ',' << m;
    os << "\n";
    if (c.dump_fields) {
      auto f = a.fields(K - 1);
      write_mhdb(f.u, dir / ("ua_" + std::to_string(n) + ".mhdb"));
      write_mhdb(f.h, dir / ("ha_" + std::to_string(n) + ".mhdb"));
    }
  }
}

ViscousParams viscous_params(const StudyConfig& c, double eps) {
  ViscousParams p;
  p.eps = eps;
  p.mu = c.mu;
  p.kappa = c.kappa;
  p.T = c.t_final;
  p.dt = c.dt;
  p.dt_snap = c.dt_snap;
  p.order = c.order;
  return p;
}

void cmd_viscous(const StudyConfig& c) {
  auto dir = prepare(c, "viscous");
  for (std::size_t n = 0; n < c.eps_list.size(); ++n) {
    double eps = c.eps_list[n];
    auto g = assembly_grid(eps, c.nx, c.assembly_ny, c.ly, c.points_per_layer);
    auto p = viscous_params(c, eps);
    auto sol = solve_viscous_mhd(sample(preset_initial_data(c.preset, c.preset_params), g), p);
    auto b = energy_budget(sol.traj, p);
    write_series(dir / ("budget_" + std::to_string(n) + ".csv"), "residual", b.t, b.residual);
    spdlog::info("viscous eps={:.4g}: max relative budget residual {:.3e}", eps, b.max_relative);
    if (c.dump_fields) sol.traj.save(dir / ("eps_" + std::to_string(n)), "visc");
  }
}

void cmd_diagnose(const StudyConfig& c) {
  auto dir = prepare(c, "diagnose");
  auto st = run_stages(c);
  for (std::size_t n = 0; n < c.eps_list.size(); ++n) {
    double eps = c.eps_list[n];
    auto r = run_pipeline(c, st, eps);
    const auto& g = r.approx->grid();
    std::vector<CoefficientFields> series;
    std::vector<double> dom;
    for (int k = 0; k < st.bl0.traj.size(); ++k) {
      series.push_back(compute_ap_bp(st.bl0, k, eps, g, c.delta0, c.order));
      auto a = r.approx->fields(k);
      VectorState rem{r.viscous.traj.at(k, "u") - a.u, r.viscous.traj.at(k, "v") - a.v,
                      r.viscous.traj.at(k, "h") - a.h, r.viscous.traj.at(k, "g") - a.g, std::nullopt};
      auto sf = stream_function(rem.h, rem.g, 1e-2, c.order);
      dom.push_back(domination_constant(rem, sf.psi, transform(rem, sf.psi, series.back(), c.order), 2, c.order));
    }
    auto rep = check_symmetrizer(series, c.mu, c.kappa, c.delta);
    write_diagnostics_csv(diagnostic_rows(rep, dom), dir / ("diagnostics_" + std::to_string(n) + ".csv"));
    spdlog::info("diagnose eps={:.4g}: bound {:.4f}, c_delta {:.4f}, min sym(SB) {:.4f}, held {}", eps, rep.bound,
                 rep.c_delta, rep.min_sb_eig, rep.held_throughout);
  }
}

void cmd_study(const StudyConfig& c, int jobs) {
  auto rep = run_study(c, jobs);
  emit_report(rep, c.out_dir, c.dump_fields);
  std::vector<double> e, err;
  for (const auto& r : rep.rows) {
    e.push_back(r.eps);
    err.push_back(r.linf_error);
    std::cout << std::setprecision(6) << "eps " << r.eps << "  linf " << r.linf_error << "  l2 " << r.l2_error
              << "  (" << r.walltime_s << " s)\n";
  }
  if (rep.rows.size() >= 3) {
    auto f = fit_rate(e, err);
    std::cout << "slope " << f.slope << " +/- " << f.ci95 << " (n = " << f.n_points << ")\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary-layer expansion and vanishing-viscosity study for 2D MHD"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "config file (key = value lines)")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "output directory (overrides out_dir)");
  app.add_option("--jobs", g.jobs, "parallel eps cases for study")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "seed for synthetic-noise checks");

  std::string which;
  for (const char* name : {"inner0", "bl0", "inner1", "bl1", "assemble", "viscous", "diagnose", "study"})
    app.add_subcommand(name)->callback([&which, name] { which = name; });
  app.add_subcommand("fit-check", "fit the rate of synthetic eps^0.375 data with 5% noise")
      ->callback([&which] { which = "fit-check"; });
  CLI11_PARSE(app, argc, argv);

  try {
    if (which == "fit-check") {
      std::mt19937_64 rng(g.seed);
      std::normal_distribution<double> N(0.0, 0.05);
      StudyConfig c;
      std::vector<double> err;
      for (double e : c.eps_list) err.push_back(std::pow(e, 0.375) * std::exp(N(rng)));
      auto f = fit_rate(c.eps_list, err);
      std::cout << "slope " << f.slope << " +/- " << f.ci95 << "\n";
      return 0;
    }
    StudyConfig c = load(g);
    if (which == "inner0") cmd_inner0(c);
    else if (which == "bl0") cmd_bl0(c);
    else if (which == "inner1" || which == "bl1") cmd_stages(c, which);
    else if (which == "assemble") cmd_assemble(c);
    else if (which == "viscous") cmd_viscous(c);
    else if (which == "diagnose") cmd_diagnose(c);
    else cmd_study(c, g.jobs);
  } catch (const StageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
