#include "mhdbl/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <array>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "mhdbl/cutoff.hpp"
#include "mhdbl/fd.hpp"
#include "mhdbl/interp.hpp"
#include "mhdbl/ops.hpp"

namespace mhdbl {

namespace {

std::vector<double> eta_queries(const Grid& target, double eps) {
  std::vector<double> q(target.ny());
  const double s = std::sqrt(eps);
  for (int j = 0; j < target.ny(); ++j) q[j] = target.y(j) / s;
  return q;
}

void same_grid(const Field& a, const Field& b, const char* who) {
  if (!a.grid().same_shape(b.grid())) throw std::invalid_argument(std::string(who) + ": fields on different grids");
}

double vector_l2(std::initializer_list<const Field*> fs) {
  double s = 0.0;
  for (const Field* f : fs) {
    double n = l2_norm(*f);
    s += n * n;
  }
  return std::sqrt(s);
}

}  // namespace

CoefficientFields compute_ap_bp(const Field& up, const Field& hp, double eps, const GridPtr& target, double delta0,
                                int order) {
  if (!(eps > 0.0)) throw std::invalid_argument("compute_ap_bp: eps must be positive");
  same_grid(up, hp, "compute_ap_bp");
  const Grid& bl = up.grid();
  if (bl.kind() != GridKind::BLGrid) throw std::invalid_argument("compute_ap_bp: u^p and h^p must live on a BL grid");
  if (target->kind() != GridKind::Grid2D || target->nx() != bl.nx())
    throw std::invalid_argument("compute_ap_bp: target must be a Grid2D with the layer's nx");
  for (int i = 0; i < bl.nx(); ++i)
    for (int j = 0; j < bl.ny(); ++j)
      if (hp(i, j) < 0.5 * delta0) {
        std::ostringstream os;
        os << "compute_ap_bp: h^p = " << hp(i, j) << " < delta0/2 = " << 0.5 * delta0 << " at x=" << bl.x(i)
           << ", eta=" << bl.y(j) << "; a^p and b^p require h^p bounded away from zero";
        throw PositivityViolation(os.str(), 0.0, bl.x(i), bl.y(j), hp(i, j));
      }

  ColumnInterp ci(bl.y(), eta_queries(*target, eps));
  Field u = ci.apply(up, target, true), h = ci.apply(hp, target, true);
  Field dh = ci.apply(ddy(hp, order), target, false);
  CoefficientFields c;
  c.eps = eps;
  c.ap = Field(target, "ap");
  c.bp = Field(target, "bp");
  const double s = 1.0 / std::sqrt(eps);
  for (int j = 0; j < target->ny(); ++j) {
    double cy = chi(target->y(j));
    for (int i = 0; i < target->nx(); ++i) {
      c.ap(i, j) = cy * u(i, j) / h(i, j);
      c.bp(i, j) = s * dh(i, j) / h(i, j);
    }
  }
  return c;
}

CoefficientFields compute_ap_bp(const BLSolution0& bl, int k, double eps, const GridPtr& target, double delta0,
                                int order) {
  if (k < 0 || k >= bl.traj.size()) throw std::out_of_range("compute_ap_bp: snapshot index out of range");
  CoefficientFields c = compute_ap_bp(bl.traj.at(k, "up"), bl.traj.at(k, "hp"), eps, target, delta0, order);
  c.time = bl.traj.times()[k];
  return c;
}

StreamFunction stream_function(const Field& h, const Field& g, double div_tol, int order) {
  same_grid(h, g, "stream_function");
  const Grid& gr = h.grid();
  const int nx = gr.nx(), ny = gr.ny();
  if (ny < 4) throw std::invalid_argument("stream_function: need at least 4 rows");
  StreamFunction sf;
  sf.psi = Field(h.grid_ptr(), "psi");
  const double q = 0.5 / std::sqrt(3.0);
  for (int j = 0; j + 1 < ny; ++j) {
    // cubic through four nodes around [y_j, y_{j+1}], integrated by 2-point Gauss
    int s = std::clamp(j - 1, 0, ny - 4);
    double mid = 0.5 * (gr.y(j) + gr.y(j + 1)), d = gr.y(j + 1) - gr.y(j);
    std::array<double, 4> w{};
    for (double x : {mid - q * d, mid + q * d}) {
      auto l = fornberg_weights(x, &gr.y()[s], 4, 0);
      for (int m = 0; m < 4; ++m) w[m] += 0.5 * d * l[m];
    }
    for (int i = 0; i < nx; ++i) {
      double acc = sf.psi(i, j);
      for (int m = 0; m < 4; ++m) acc += w[m] * h(i, s + m);
      sf.psi(i, j + 1) = acc;
    }
  }
  sf.residual = linf_norm(g + ddx(sf.psi));
  sf.div_defect = linf_norm(divergence(h, g, order));
  if (sf.div_defect > div_tol)
    spdlog::warn("stream_function: (h, g) divergence defect {:.3e} > {:.1e}; psi matches h only", sf.div_defect,
                 div_tol);
  return sf;
}

TransformedState transform(const VectorState& r, const Field& psi, const CoefficientFields& c, int order) {
  for (const Field* f : {&r.v, &r.h, &r.g, &psi, &c.ap, &c.bp}) same_grid(r.u, *f, "transform");
  Field aps = c.ap * psi;
  return {r.u - ddy(aps, order), r.v + ddx(aps), r.h - c.bp * psi, r.g};
}

VectorState inverse_transform(const TransformedState& U, const Field& psi, const CoefficientFields& c, int order) {
  for (const Field* f : {&U.v, &U.h, &U.g, &psi, &c.ap, &c.bp}) same_grid(U.u, *f, "inverse_transform");
  Field aps = c.ap * psi;
  return {U.u + ddy(aps, order), U.v - ddx(aps), U.h + c.bp * psi, U.g, std::nullopt};
}

VectorState inverse_transform_expanded(const TransformedState& U, const Field& psi, const CoefficientFields& c,
                                       int order) {
  for (const Field* f : {&U.v, &U.h, &U.g, &psi, &c.ap, &c.bp}) same_grid(U.u, *f, "inverse_transform_expanded");
  return {U.u + c.ap * U.h + (ddy(c.ap, order) + c.ap * c.bp) * psi, U.v + c.ap * U.g - ddx(c.ap) * psi,
          U.h + c.bp * psi, U.g, std::nullopt};
}

double domination_constant(const VectorState& r, const Field& psi, const TransformedState& U, int max_dx,
                           int order) {
  if (max_dx < 0) throw std::invalid_argument("domination_constant: max_dx must be >= 0");
  const Grid& g = psi.grid();
  // y^{-1} psi, with the limit d_y psi on the wall
  Field py(psi.grid_ptr());
  Field dpsi = ddy(psi, order);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) py(i, j) = j == 0 ? dpsi(i, 0) : psi(i, j) / g.y(j);

  VectorState a = r;
  TransformedState b = U;
  double rhs = 0.0, C = 0.0;
  for (int n = 0; n <= max_dx; ++n) {
    if (n > 0) {
      a = {ddx(a.u), ddx(a.v), ddx(a.h), ddx(a.g), std::nullopt};
      b = {ddx(b.u), ddx(b.v), ddx(b.h), ddx(b.g)};
      py = ddx(py);
    }
    rhs += vector_l2({&b.u, &b.v, &b.h, &b.g});
    double lhs = vector_l2({&a.u, &a.v, &a.h, &a.g}) + l2_norm(py);
    if (rhs > 0.0)
      C = std::max(C, lhs / rhs);
    else if (lhs > 0.0)
      return std::numeric_limits<double>::infinity();
  }
  return C;
}

double sb_min_eig(double a, double mu, double kappa) {
  double p = mu, q = kappa * (1.0 - a * a), r = 0.5 * (mu - kappa) * a;
  return 0.5 * (p + q) - std::hypot(0.5 * (p - q), r);
}

SymmetrizerReport check_symmetrizer(const std::vector<CoefficientFields>& series, double mu, double kappa,
                                    double delta) {
  if (!(mu > 0.0 && kappa > 0.0 && delta > 0.0) || !(delta < std::min(mu, kappa)))
    throw std::invalid_argument("check_symmetrizer: need mu, kappa, delta > 0 and delta < min(mu, kappa)");
  if (series.empty()) throw std::invalid_argument("check_symmetrizer: empty series");
  SymmetrizerReport rep;
  const double den = (mu + kappa) * (mu + kappa) - 4.0 * delta * kappa;
  rep.bound = 4.0 * (mu - delta) * (kappa - delta) / den;
  rep.c_delta = ((mu - kappa) * (mu - kappa) + 4.0 * delta * (mu - delta)) / den;
  rep.min_sb_eig = std::numeric_limits<double>::infinity();
  rep.ok = true;
  rep.held_throughout = true;
  constexpr double tol = 1e-14;  // the bound and c_delta are complementary up to rounding
  for (const auto& c : series) {
    SymmetrizerRow row;
    row.time = c.time;
    row.sup_a = linf_norm(c.ap);
    row.margin = 1.0 - row.sup_a * row.sup_a - rep.c_delta;
    row.min_sb_eig = std::numeric_limits<double>::infinity();
    const double* ap = c.ap.data();
    for (std::size_t n = 0; n < c.ap.grid().size(); ++n) row.min_sb_eig = std::min(row.min_sb_eig, sb_min_eig(ap[n], mu, kappa));
    row.small = row.sup_a * row.sup_a <= rep.bound;
    if (!row.small && rep.held_throughout) {
      rep.held_throughout = false;
      rep.T_delta = row.time;
    }
    rep.ok = rep.ok && row.small && row.margin >= -tol && row.min_sb_eig >= delta - tol;
    rep.min_sb_eig = std::min(rep.min_sb_eig, row.min_sb_eig);
    rep.rows.push_back(row);
  }
  if (rep.held_throughout) rep.T_delta = series.back().time;
  return rep;
}

SymmetrizerReport check_symmetrizer(const CoefficientFields& c, double mu, double kappa, double delta) {
  return check_symmetrizer(std::vector<CoefficientFields>{c}, mu, kappa, delta);
}

std::vector<DiagnosticRow> diagnostic_rows(const SymmetrizerReport& rep, const std::vector<double>& domination) {
  if (!domination.empty() && domination.size() != rep.rows.size())
    throw std::invalid_argument("diagnostic_rows: one domination constant per snapshot expected");
  std::vector<DiagnosticRow> out;
  for (std::size_t n = 0; n < rep.rows.size(); ++n) {
    const auto& r = rep.rows[n];
    out.push_back({r.time, r.sup_a, r.margin, r.min_sb_eig,
                   domination.empty() ? std::numeric_limits<double>::quiet_NaN() : domination[n]});
  }
  return out;
}

namespace {
constexpr const char* kDiagHeader = "time,sup_ap,c_delta_margin,min_sb_eig,domination_constant";
}

void write_diagnostics_csv(const std::vector<DiagnosticRow>& rows, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_diagnostics_csv: cannot open " + path.string());
  os << kDiagHeader << "\n" << std::setprecision(17);
  for (const auto& r : rows)
    os << r.time << ',' << r.sup_ap << ',' << r.c_delta_margin << ',' << r.min_sb_eig << ',' << r.domination << "\n";
}

std::vector<DiagnosticRow> read_diagnostics_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_diagnostics_csv: cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line) || line != kDiagHeader)
    throw std::runtime_error("read_diagnostics_csv: unexpected header in " + path.string());
  std::vector<DiagnosticRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::array<double, 5> v{};
    for (int n = 0; n < 5; ++n) {
      if (!std::getline(ss, cell, ',')) throw std::runtime_error("read_diagnostics_csv: short row: " + line);
      v[n] = std::stod(cell);
    }
    rows.push_back({v[0], v[1], v[2], v[3], v[4]});
  }
  return rows;
}

}  // namespace mhdbl
