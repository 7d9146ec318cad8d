#include "mhdbl/study.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <boost/math/distributions/students_t.hpp>
#include <spdlog/spdlog.h>

#include "mhdbl/inner1.hpp"
#include "mhdbl/mhdb.hpp"
#include "mhdbl/ops.hpp"

namespace mhdbl {

namespace {

template <class F>
auto stage(const std::string& name, const std::shared_ptr<const Constituents>& partial, F&& f) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what(), partial);
  }
}

InnerOptions inner_options(const StudyConfig& c) {
  InnerOptions o;
  o.dt_snap = c.dt_snap;
  o.order = c.order;
  return o;
}

BLOptions bl_options(const StudyConfig& c) {
  BLOptions o;
  o.mu = c.mu;
  o.kappa = c.kappa;
  o.delta0 = c.delta0;
  o.order = c.order;
  return o;
}

}  // namespace

StageOutputs run_stages(const StudyConfig& c) {
  validate(c);
  StageOutputs out;
  out.parts = std::make_shared<Constituents>();
  Constituents& p = *out.parts;
  p.order = c.order;
  std::shared_ptr<const Constituents> partial = out.parts;
  auto gi = make_grid2d(c.nx, c.inner_ny, c.ly);
  p.inner0 = stage("inner0", partial, [&] {
    return solve_ideal_mhd(sample(preset_initial_data(c.preset, c.preset_params), gi), c.t_final, c.dt,
                           inner_options(c));
  });
  p.trace0 = stage("inner0", partial, [&] { return extract_trace(p.inner0.traj, c.order); });
  out.bl0 = stage("bl0", partial, [&] {
    return solve_bl0(p.trace0, make_blgrid(c.nx, c.bl_neta, c.bl_leta), c.dt, bl_options(c));
  });
  p.profile0 = stage("bl0", partial, [&] { return derive_profile0(out.bl0, p.trace0); });
  p.inner1 = stage("inner1", partial, [&] {
    return solve_linearized_mhd(p.inner0, bc_from_profile0(p.profile0), c.t_final, c.dt, inner_options(c));
  });
  p.trace1 = stage("inner1", partial, [&] { return extract_trace(p.inner1.traj, c.order); });
  p.pressure = stage("bl1", partial, [&] { return pressure_corrector(p.profile0, p.trace0, p.trace1, c.mu, c.order); });
  p.profile1 = stage("bl1", partial, [&] { return solve_bl1(p.profile0, p.trace0, p.trace1, c.dt, bl_options(c)); });
  return out;
}

PipelineResult run_pipeline(const StudyConfig& c, const StageOutputs& stages, double eps) {
  auto start = std::chrono::steady_clock::now();
  PipelineResult r;
  r.eps = eps;
  r.parts = stages.parts;
  auto grid = stage("assemble", r.parts, [&] { return assembly_grid(eps, c.nx, c.assembly_ny, c.ly, c.points_per_layer); });
  r.approx = stage("assemble", r.parts, [&] { return std::make_shared<ApproxSolution>(eps, r.parts, grid); });

  ViscousParams vp;
  vp.eps = eps;
  vp.mu = c.mu;
  vp.kappa = c.kappa;
  vp.T = c.t_final;
  vp.dt = c.dt;
  vp.dt_snap = c.dt_snap;
  vp.order = c.order;
  r.viscous = stage("viscous", r.parts, [&] {
    return solve_viscous_mhd(sample(preset_initial_data(c.preset, c.preset_params), grid), vp);
  });
  const auto& ta = r.approx->times();
  const auto& tv = r.viscous.traj.times();
  if (ta.size() != tv.size())
    throw StageError("compare", "snapshot counts differ between the viscous solve and the stages", r.parts);

  stage("compare", r.parts, [&] {
    for (int k = 0; k < r.approx->size(); ++k) {
      if (std::abs(ta[k] - tv[k]) > 1e-9 * std::max(1.0, ta[k]))
        throw std::runtime_error("snapshot times differ at index " + std::to_string(k));
      VectorState lo = r.approx->leading_order(k);
      std::array<Field, 4> d = {r.viscous.traj.at(k, "u") - lo.u, r.viscous.traj.at(k, "v") - lo.v,
                                r.viscous.traj.at(k, "h") - lo.h, r.viscous.traj.at(k, "g") - lo.g};
      double l2sq = 0.0;
      for (int i = 0; i < 4; ++i) {
        double m = linf_norm(d[i]);
        r.error.linf_c[i] = std::max(r.error.linf_c[i], m);
        r.error.linf = std::max(r.error.linf, m);
        double l = l2_norm(d[i]);
        l2sq += l * l;
      }
      r.error.l2 = std::max(r.error.l2, std::sqrt(l2sq));
      if (k == r.approx->size() - 1) {
        r.error_field = Field(grid, "error");
        for (std::size_t n = 0; n < grid->size(); ++n) {
          double m = 0.0;
          for (const auto& f : d) m = std::max(m, std::abs(f.data()[n]));
          r.error_field.data()[n] = m;
        }
      }
    }
    return 0;
  });

  stage("remainder", r.parts, [&] {
    const int K = r.approx->size();
    if (K >= 4) r.remainder_l2 = remainders(*r.approx, c.mu, c.kappa, {K / 2, K - 2}).sup_l2();
    return 0;
  });
  r.walltime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

PipelineResult run_pipeline(const StudyConfig& c, double eps) { return run_pipeline(c, run_stages(c), eps); }

RateFit fit_rate(const std::vector<double>& eps, const std::vector<double>& errors) {
  if (eps.size() != errors.size()) throw std::invalid_argument("fit_rate: eps and errors differ in length");
  std::vector<double> X, Y;
  for (std::size_t n = 0; n < eps.size(); ++n) {
    if (!(eps[n] > 0.0) || !(errors[n] > 0.0) || !std::isfinite(errors[n])) {
      spdlog::warn("fit_rate: dropping point eps={} error={} (log undefined)", eps[n], errors[n]);
      continue;
    }
    X.push_back(std::log(eps[n]));
    Y.push_back(std::log(errors[n]));
  }
  const int n = static_cast<int>(X.size());
  if (n < 3) throw std::invalid_argument("fit_rate: need at least 3 positive points, got " + std::to_string(n));
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += X[i];
    my += Y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (X[i] - mx) * (X[i] - mx);
    sxy += (X[i] - mx) * (Y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_rate: eps values must not all coincide");
  RateFit f;
  f.n_points = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0.0;
  for (int i = 0; i < n; ++i) {
    double e = Y[i] - f.intercept - f.slope * X[i];
    ssr += e * e;
  }
  double se = std::sqrt(ssr / (n - 2) / sxx);
  boost::math::students_t t(n - 2);
  f.ci95 = boost::math::quantile(boost::math::complement(t, 0.025)) * se;
  return f;
}

ConvergenceRow to_row(const PipelineResult& r) {
  ConvergenceRow row;
  row.eps = r.eps;
  row.linf_error = r.error.linf;
  row.l2_error = r.error.l2;
  row.linf_c = r.error.linf_c;
  row.r_l2 = r.remainder_l2;
  row.walltime_s = r.walltime_s;
  return row;
}

ConvergenceReport run_study(const StudyConfig& c, int jobs) {
  validate(c);
  StageOutputs stages = run_stages(c);
  const int n = static_cast<int>(c.eps_list.size());
  std::vector<PipelineResult> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int m = next++; m < n; m = next++) {
      try {
        results[m] = run_pipeline(c, stages, c.eps_list[m]);
        spdlog::info("study: eps={:.4g} linf error {:.4e} ({:.1f} s)", c.eps_list[m], results[m].error.linf,
                     results[m].walltime_s);
      } catch (...) {
        errors[m] = std::current_exception();
      }
    }
  };
  const int nt = std::clamp(jobs, 1, n);
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  ConvergenceReport rep;
  rep.metadata = to_config_text(c);
  for (const auto& r : results) {
    rep.rows.push_back(to_row(r));
    rep.error_fields.push_back(r.error_field);
  }
  return rep;
}

namespace {

constexpr const char* kConvHeader =
    "eps,linf_error,l2_error,linf_u,linf_v,linf_h,linf_g,r1_l2,r2_l2,r3_l2,r4_l2,walltime_s";

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

void emit_report(const ConvergenceReport& rep, const std::filesystem::path& dir, bool dump) {
  if (rep.rows.empty()) throw std::invalid_argument("no data");
  std::filesystem::create_directories(dir);
  std::ostringstream csv;
  csv << kConvHeader << "\n" << std::setprecision(17);
  for (const auto& r : rep.rows) {
    csv << r.eps << ',' << r.linf_error << ',' << r.l2_error;
    for (double v : r.linf_c) csv << ',' << v;
    for (double v : r.r_l2) csv << ',' << v;
    csv << ',' << r.walltime_s << "\n";
  }
  write_text(dir / "convergence.csv", csv.str());

  std::ostringstream rate;
  rate << std::setprecision(17);
  std::vector<double> e, err;
  for (const auto& r : rep.rows) {
    e.push_back(r.eps);
    err.push_back(r.linf_error);
  }
  try {
    RateFit f = fit_rate(e, err);
    rate << "slope = " << f.slope << "\nci95 = " << f.ci95 << "\nn_points = " << f.n_points << "\n";
  } catch (const std::invalid_argument& ex) {
    rate << "slope = nan\nci95 = nan\nn_points = " << rep.rows.size() << "\n# fit refused: " << ex.what() << "\n";
  }
  rate << "monotone = " << (monotone_decreasing(rep.rows) ? "true" : "false") << "\n";
  rate << "# the eps range approaches the asymptotic regime; it does not reach it\n";
  write_text(dir / "rate.txt", rate.str());
  if (!rep.metadata.empty()) write_text(dir / "config.txt", rep.metadata);

  if (dump) {
    if (rep.error_fields.size() != rep.rows.size())
      throw std::invalid_argument("emit_report: dump requested without one error field per row");
    for (std::size_t n = 0; n < rep.rows.size(); ++n)
      write_mhdb(rep.error_fields[n], dir / ("error_" + std::to_string(n) + ".mhdb"));
  }
}

std::vector<ConvergenceRow> read_convergence_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line) || line != kConvHeader)
    throw std::runtime_error("read_convergence_csv: unexpected header in " + path.string());
  std::vector<ConvergenceRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::array<double, 12> v{};
    for (auto& x : v) {
      if (!std::getline(ss, cell, ',')) throw std::runtime_error("read_convergence_csv: short row: " + line);
      x = std::stod(cell);
    }
    ConvergenceRow r;
    r.eps = v[0];
    r.linf_error = v[1];
    r.l2_error = v[2];
    for (int i = 0; i < 4; ++i) {
      r.linf_c[i] = v[3 + i];
      r.r_l2[i] = v[7 + i];
    }
    r.walltime_s = v[11];
    rows.push_back(r);
  }
  return rows;
}

bool monotone_decreasing(const std::vector<ConvergenceRow>& rows) {
  for (std::size_t n = 1; n < rows.size(); ++n)
    if (!(rows[n].linf_error < rows[n - 1].linf_error)) return false;
  return true;
}

}  // namespace mhdbl
