#pragma once

#include <filesystem>
#include <vector>

#include "mhdbl/bl0.hpp"
#include "mhdbl/field.hpp"

namespace mhdbl {

/// a^p = chi(y) u^p / h^p and b^p = eps^{-1/2} d_eta h^p / h^p at eta = y/sqrt(eps),
/// on a physical-y grid.
struct CoefficientFields {
  double eps = 0.0, time = 0.0;
  Field ap, bp;
};

/// From layer fields u^p, h^p on a BL grid. Beyond the layer domain u^p, h^p
/// hold their last row and d_eta h^p is zero. Throws PositivityViolation when
/// min h^p < delta0/2: the coefficients need h^p bounded away from zero.
CoefficientFields compute_ap_bp(const Field& up, const Field& hp, double eps, const GridPtr& target,
                                double delta0 = 0.5, int order = 4);
/// Snapshot k of a layer solution.
CoefficientFields compute_ap_bp(const BLSolution0& bl, int k, double eps, const GridPtr& target,
                                double delta0 = 0.5, int order = 4);

/// psi = int_0^y h (fourth-order quadrature), so h = d_y psi and psi = 0 on the
/// wall. residual = max |g + d_x psi|; div_defect = max |d_x h + d_y g|.
struct StreamFunction {
  Field psi;
  double residual = 0.0, div_defect = 0.0;
};
/// Warns when div_defect exceeds div_tol.
StreamFunction stream_function(const Field& h, const Field& g, double div_tol = 1e-6, int order = 4);

/// U = (u~, v~, h~, g~) and the psi it was built with.
struct TransformedState {
  Field u, v, h, g;
};

/// u~ = u - d_y(a psi), v~ = v + d_x(a psi), h~ = h - b psi, g~ = g.
/// d_x and d_y act on separate axes and commute, so d_x u~ + d_y v~ equals
/// d_x u + d_y v up to roundoff.
TransformedState transform(const VectorState& r, const Field& psi, const CoefficientFields& c, int order = 4);

/// Exact discrete inverse: h = h~ + b psi, u = u~ + d_y(a psi), v = v~ - d_x(a psi),
/// g = g~. With h = d_y psi and g = -d_x psi this is
/// u = u~ + a h~ + (d_y a + a b) psi and v = v~ + a g~ - d_x a psi.
VectorState inverse_transform(const TransformedState& U, const Field& psi, const CoefficientFields& c, int order = 4);
/// The expanded form above, evaluated term by term. Agrees with
/// inverse_transform up to the truncation of d_y psi - h and d_x psi + g.
VectorState inverse_transform_expanded(const TransformedState& U, const Field& psi, const CoefficientFields& c,
                                       int order = 4);

/// Measured constant of the norm domination
/// ||d_x^a (u,H)|| + ||y^{-1} d_x^a psi|| <= C sum_{b<=a} ||d_x^b U|| (L2), as the
/// maximum ratio over a = 0..max_dx. x-derivatives only; y^{-1} psi on the
/// wall is d_y psi.
double domination_constant(const VectorState& r, const Field& psi, const TransformedState& U, int max_dx = 2,
                           int order = 4);

/// Symmetrizer conditions at one snapshot or over a series.
struct SymmetrizerRow {
  double time = 0.0;
  double sup_a = 0.0;
  double margin = 0.0;  // min (1 - a^2) - c_delta
  double min_sb_eig = 0.0;
  bool small = false;  // sup a^2 <= bound
};
struct SymmetrizerReport {
  bool ok = false;
  double bound = 0.0;    // 4(mu-delta)(kappa-delta) / ((mu+kappa)^2 - 4 delta kappa)
  double c_delta = 0.0;  // ((mu-kappa)^2 + 4 delta (mu-delta)) / ((mu+kappa)^2 - 4 delta kappa)
  double min_sb_eig = 0.0;
  /// First time the smallness bound fails; the last time when it never fails.
  double T_delta = 0.0;
  bool held_throughout = false;
  std::vector<SymmetrizerRow> rows;
};

/// Smallest eigenvalue of the symmetric part of SB at one point: per pair of
/// components the 2x2 block [[mu, (mu-kappa) a/2], [(mu-kappa) a/2, kappa (1-a^2)]].
double sb_min_eig(double a, double mu, double kappa);

/// ok when every snapshot satisfies the smallness bound, 1 - a^2 >= c_delta and
/// min eig sym(SB) >= delta. Requires mu, kappa, delta > 0 and delta < min(mu, kappa).
SymmetrizerReport check_symmetrizer(const std::vector<CoefficientFields>& series, double mu, double kappa,
                                    double delta);
SymmetrizerReport check_symmetrizer(const CoefficientFields& c, double mu, double kappa, double delta);

/// One CSV row per snapshot: time, sup_ap, c_delta_margin, min_sb_eig,
/// domination_constant (nan when not measured).
struct DiagnosticRow {
  double time = 0.0, sup_ap = 0.0, c_delta_margin = 0.0, min_sb_eig = 0.0, domination = 0.0;
};
std::vector<DiagnosticRow> diagnostic_rows(const SymmetrizerReport& rep, const std::vector<double>& domination);
void write_diagnostics_csv(const std::vector<DiagnosticRow>& rows, const std::filesystem::path& path);
std::vector<DiagnosticRow> read_diagnostics_csv(const std::filesystem::path& path);

}  // namespace mhdbl
