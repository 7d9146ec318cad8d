#pragma once

#include <array>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "mhdbl/assembler.hpp"
#include "mhdbl/config.hpp"
#include "mhdbl/viscous.hpp"

namespace mhdbl {

/// A pipeline stage failed. `stage` names it; `partial` holds the stages that
/// completed before it.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what, std::shared_ptr<const Constituents> partial)
      : std::runtime_error("stage " + stage + ": " + what), stage(std::move(stage)), partial(std::move(partial)) {}
  std::string stage;
  std::shared_ptr<const Constituents> partial;
};

/// The eps-independent stages: inner0, bl0 (with its positivity series),
/// inner1, pressure corrector, bl1.
struct StageOutputs {
  std::shared_ptr<Constituents> parts;
  BLSolution0 bl0;
};
StageOutputs run_stages(const StudyConfig& c);

/// Difference of the viscous solution and the comparand
/// (u0, v0, h0, g0) + (ub0, sqrt(eps) vb0, hb0, sqrt(eps) gb0)(y/sqrt(eps)),
/// as sup over snapshots.
struct ErrorSummary {
  double linf = 0.0, l2 = 0.0;
  std::array<double, 4> linf_c{};  // u, v, h, g
};

struct PipelineResult {
  double eps = 0.0;
  std::shared_ptr<const Constituents> parts;
  std::shared_ptr<ApproxSolution> approx;
  ViscousSolution viscous;
  ErrorSummary error;
  std::array<double, 4> remainder_l2{};  // sup over the evaluated snapshots
  Field error_field;                     // max over components of |difference| at the last snapshot
  double walltime_s = 0.0;
};

/// Viscous solve from the preset's initial data on the eps-dependent assembly
/// grid, compared with the assembled layer fields. Throws StageError.
PipelineResult run_pipeline(const StudyConfig& c, const StageOutputs& stages, double eps);
PipelineResult run_pipeline(const StudyConfig& c, double eps);

/// Least squares on (log eps, log error). ci95 is the half-width of the 95%
/// interval of the slope (Student t, n-2 dof; zero for exact data).
struct RateFit {
  double slope = 0.0, intercept = 0.0, ci95 = 0.0;
  int n_points = 0;
};
/// Non-positive errors are dropped with a warning; fewer than 3 usable points
/// throw std::invalid_argument.
RateFit fit_rate(const std::vector<double>& eps, const std::vector<double>& errors);

struct ConvergenceRow {
  double eps = 0.0, linf_error = 0.0, l2_error = 0.0;
  std::array<double, 4> linf_c{};
  std::array<double, 4> r_l2{};
  double walltime_s = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;  // decreasing eps
  std::vector<Field> error_fields;   // optional, one per row
  std::string metadata;              // configuration text
};

ConvergenceRow to_row(const PipelineResult& r);

/// Runs every eps of the config, on up to `jobs` threads; each case is
/// independent and deterministic, so results do not depend on jobs.
ConvergenceReport run_study(const StudyConfig& c, int jobs = 1);

/// Writes convergence.csv, rate.txt and config.txt to dir, and error_<n>.mhdb
/// per row when dump is set. Throws std::invalid_argument("no data") on an
/// empty report; rate.txt reports the fit or why it was refused.
void emit_report(const ConvergenceReport& rep, const std::filesystem::path& dir, bool dump = false);
std::vector<ConvergenceRow> read_convergence_csv(const std::filesystem::path& path);

/// True when linf_error strictly decreases along the rows.
bool monotone_decreasing(const std::vector<ConvergenceRow>& rows);

}  // namespace mhdbl
