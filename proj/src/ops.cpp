#include "mhdbl/ops.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "mhdbl/fd.hpp"
#include "mhdbl/linalg.hpp"
#include "mhdbl/spectral.hpp"

namespace mhdbl {

using cplx = std::complex<double>;

Field ddx(const Field& f) {
  f.check_finite("ddx");
  Field out(f.grid_ptr(), "d_x " + f.label());
  spectral::deriv(f.data(), out.data(), f.nx(), f.ny(), 1);
  return out;
}

Field d2x(const Field& f) {
  f.check_finite("d2x");
  Field out(f.grid_ptr(), "d_xx " + f.label());
  spectral::deriv(f.data(), out.data(), f.nx(), f.ny(), 2);
  return out;
}

namespace {

Field apply_y(const Field& f, int deriv, int order, const char* name) {
  const YOperator& op = f.grid().op(deriv, order);
  Field out(f.grid_ptr(), std::string(name) + " " + f.label());
  const int nx = f.nx();
  for (int i = 0; i < nx; ++i) op.apply(f.data() + i, out.data() + i, nx);
  return out;
}

}  // namespace

Field ddy(const Field& f, int order) { return apply_y(f, 1, order, "d_y"); }
Field d2y(const Field& f, int order) { return apply_y(f, 2, order, "d_yy"); }

Field tail_integral(const Field& f, double tail_tol) {
  const Grid& g = f.grid();
  const int nx = g.nx(), ny = g.ny();
  double tail = 0.0;
  for (int i = 0; i < nx; ++i) tail = std::max(tail, std::abs(f(i, ny - 1)));
  if (tail > tail_tol)
    spdlog::warn("tail_integral: |{}| at y={} is {:.3e} > {:.1e}; truncated tail treated as zero",
                 f.label(), g.L(), tail, tail_tol);
  Field out(f.grid_ptr(), "tail " + f.label());
  for (int j = ny - 2; j >= 0; --j) {
    double h = 0.5 * (g.y(j + 1) - g.y(j));
    for (int i = 0; i < nx; ++i) out(i, j) = out(i, j + 1) + h * (f(i, j) + f(i, j + 1));
  }
  return out;
}

Field cumulative_integral(const Field& f) {
  const Grid& g = f.grid();
  const int nx = g.nx(), ny = g.ny();
  Field out(f.grid_ptr(), "cum " + f.label());
  for (int j = 1; j < ny; ++j) {
    double h = 0.5 * (g.y(j) - g.y(j - 1));
    for (int i = 0; i < nx; ++i) out(i, j) = out(i, j - 1) + h * (f(i, j) + f(i, j - 1));
  }
  return out;
}

std::vector<double> quadrature_weights(const std::vector<double>& y) {
  const int n = static_cast<int>(y.size());
  if (n < 4) throw std::invalid_argument("quadrature_weights: need at least 4 nodes");
  std::vector<double> w(n, 0.0);
  const double g = 0.5 / std::sqrt(3.0);
  for (int j = 0; j + 1 < n; ++j) {
    // cubic through four nodes around [y_j, y_{j+1}], integrated by 2-point Gauss
    int s = std::clamp(j - 1, 0, n - 4);
    double mid = 0.5 * (y[j] + y[j + 1]), h = y[j + 1] - y[j];
    for (double q : {mid - g * h, mid + g * h}) {
      auto l = fornberg_weights(q, &y[s], 4, 0);
      for (int m = 0; m < 4; ++m) w[s + m] += 0.5 * h * l[m];
    }
  }
  return w;
}

double integrate_xy(const Field& f) {
  const Grid& g = f.grid();
  auto w = quadrature_weights(g.y());
  auto m = spectral::row_means(f.data(), g.nx(), g.ny());
  double s = 0.0;
  for (int j = 0; j < g.ny(); ++j) s += w[j] * m[j];
  return 2.0 * M_PI * s;
}

namespace {

// Spectral coefficients, row-major [j][k].
std::vector<cplx> to_modes(const Field& f) {
  std::vector<cplx> c(static_cast<std::size_t>(spectral::nmodes(f.nx())) * f.ny());
  spectral::forward(f.data(), c.data(), f.nx(), f.ny());
  return c;
}

std::vector<cplx> to_modes(const std::vector<double>& r, int nx) {
  std::vector<cplx> c(spectral::nmodes(nx));
  spectral::forward(r.data(), c.data(), nx, 1);
  return c;
}

}  // namespace

Field poisson_neumann(const Field& rhs, const std::vector<double>& wall_flux, const PoissonOptions& opt) {
  const Grid& g = rhs.grid();
  const int nx = g.nx(), ny = g.ny(), N = ny - 1, nm = spectral::nmodes(nx);
  if (static_cast<int>(wall_flux.size()) != nx)
    throw std::invalid_argument("poisson_neumann: wall_flux size does not match nx");
  rhs.check_finite("poisson_neumann");
  auto r = to_modes(rhs);
  auto fl = to_modes(wall_flux, nx);
  const auto& y = g.y();
  const auto& w = g.wy();

  // Zero-mode compatibility: sum_j w_j r_j + flux = 0.
  {
    double defect = fl[0].real() / nx;
    double scale = std::abs(defect);
    for (int j = 0; j <= N; ++j) {
      double rj = r[static_cast<std::size_t>(j) * nm].real() / nx;
      defect += w[j] * rj;
      scale += w[j] * std::abs(rj);
    }
    if (std::abs(defect) > opt.compat_tol * std::max(scale, 1.0)) {
      std::ostringstream os;
      os << "poisson_neumann: solvability violated, compatibility defect " << defect
         << " (scale " << scale << ", tolerance " << opt.compat_tol << ")";
      throw std::runtime_error(os.str());
    }
    // Remove the residual defect with a constant shift of the zero mode.
    double shift = defect / g.L() * nx;
    for (int j = 0; j <= N; ++j) r[static_cast<std::size_t>(j) * nm] -= shift;
  }

  std::vector<double> a(ny), b(ny), c(ny);
  std::vector<cplx> d(ny);
  std::vector<cplx> out(static_cast<std::size_t>(nm) * ny);
  for (int k = 0; k < nm; ++k) {
    double k2 = static_cast<double>(k) * k;
    double d0 = y[1] - y[0];
    a[0] = 0.0;
    b[0] = -2.0 / (d0 * d0) - k2;
    c[0] = 2.0 / (d0 * d0);
    d[0] = r[k] + 2.0 / d0 * fl[k];
    for (int j = 1; j < N; ++j) {
      double dm = y[j] - y[j - 1], dp = y[j + 1] - y[j];
      a[j] = 1.0 / (dm * w[j]);
      c[j] = 1.0 / (dp * w[j]);
      b[j] = -a[j] - c[j] - k2;
      d[j] = r[static_cast<std::size_t>(j) * nm + k];
    }
    // Top: Dirichlet for k != 0; the redundant zero-mode row is replaced by a
    // pin, then the weighted mean is removed below.
    a[N] = 0.0;
    b[N] = 1.0;
    c[N] = 0.0;
    d[N] = 0.0;
    solve_tridiagonal(a, b, c, d);
    if (k == 0) {
      double mean = 0.0;
      for (int j = 0; j <= N; ++j) mean += w[j] * d[j].real();
      mean /= g.L();
      for (int j = 0; j <= N; ++j) d[j] = d[j].real() - mean;
    }
    for (int j = 0; j <= N; ++j) out[static_cast<std::size_t>(j) * nm + k] = d[j];
  }
  Field p(rhs.grid_ptr(), "p");
  spectral::backward(out.data(), p.data(), nx, ny);
  return p;
}

Field poisson_operator(const Field& p, const std::vector<double>& wall_flux) {
  const Grid& g = p.grid();
  const int nx = g.nx(), N = g.ny() - 1;
  const auto& y = g.y();
  const auto& w = g.wy();
  Field out = d2x(p);
  out.set_label("lap p");
  for (int i = 0; i < nx; ++i) {
    double d0 = y[1] - y[0];
    out(i, 0) += 2.0 / d0 * ((p(i, 1) - p(i, 0)) / d0 - wall_flux[i]);
    for (int j = 1; j < N; ++j) {
      double dm = y[j] - y[j - 1], dp = y[j + 1] - y[j];
      out(i, j) += ((p(i, j + 1) - p(i, j)) / dp - (p(i, j) - p(i, j - 1)) / dm) / w[j];
    }
  }
  // Top row holds the boundary value itself.
  for (int i = 0; i < nx; ++i) out(i, N) = p(i, N);
  return out;
}

std::vector<double> discrete_wall_flux(const Field& p, const Field& rhs) {
  const Grid& g = p.grid();
  const int nx = g.nx();
  double d0 = g.y(1) - g.y(0);
  Field pxx = d2x(p);
  std::vector<double> fl(nx);
  for (int i = 0; i < nx; ++i) fl[i] = (p(i, 1) - p(i, 0)) / d0 - 0.5 * d0 * (rhs(i, 0) - pxx(i, 0));
  return fl;
}

double weighted_l2(const Field& f, double l) {
  const Grid& g = f.grid();
  const auto& w = g.wy();
  double s = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    double wt = w[j] * std::pow(1.0 + g.y(j), 2.0 * l);
    const double* r = f.row(j);
    double rs = 0.0;
    for (int i = 0; i < g.nx(); ++i) rs += r[i] * r[i];
    s += wt * rs;
  }
  return std::sqrt(s * g.dx());
}

double l2_norm(const Field& f) { return weighted_l2(f, 0.0); }

double linf_norm(const Field& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

Norms norms(const Field& f) { return {l2_norm(f), linf_norm(f)}; }

Field divergence(const Field& a, const Field& b, int order) {
  Field d = ddx(a);
  d += ddy(b, order);
  d.set_label("div");
  return d;
}

}  // namespace mhdbl
