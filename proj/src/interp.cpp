#include "mhdbl/interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mhdbl {

std::array<double, 4> lagrange4(const double* x, double q) {
  std::array<double, 4> w{};
  for (int a = 0; a < 4; ++a) {
    double p = 1.0;
    for (int b = 0; b < 4; ++b)
      if (b != a) p *= (q - x[b]) / (x[a] - x[b]);
    w[a] = p;
  }
  return w;
}

namespace {

// Index of the interval [x_k, x_{k+1}] containing q, clamped to the range.
int bracket(const std::vector<double>& x, double q) {
  auto it = std::upper_bound(x.begin(), x.end(), q);
  int k = static_cast<int>(it - x.begin()) - 1;
  return std::clamp(k, 0, static_cast<int>(x.size()) - 2);
}

}  // namespace

ColumnInterp::ColumnInterp(const std::vector<double>& nodes, const std::vector<double>& queries) {
  const int n = static_cast<int>(nodes.size());
  if (n < 4) throw std::invalid_argument("ColumnInterp: need at least 4 nodes");
  const double tol = 1e-12 * std::max(1.0, std::abs(nodes.back()));
  start_.resize(queries.size());
  w_.resize(queries.size());
  outside_.assign(queries.size(), 0);
  for (std::size_t q = 0; q < queries.size(); ++q) {
    double y = queries[q];
    if (y < nodes.front() - tol)
      throw std::out_of_range("ColumnInterp: query " + std::to_string(y) + " below first node");
    if (y > nodes.back() + tol) {
      outside_[q] = 1;
      start_[q] = n - 4;
      w_[q] = {0.0, 0.0, 0.0, 0.0};
      continue;
    }
    int k = bracket(nodes, y);
    int s = std::clamp(k - 1, 0, n - 4);
    start_[q] = s;
    w_[q] = lagrange4(&nodes[s], y);
  }
}

double ColumnInterp::apply(const double* f, int q, int stride) const {
  const auto& w = w_[q];
  const double* p = f + static_cast<std::ptrdiff_t>(start_[q]) * stride;
  return w[0] * p[0] + w[1] * p[stride] + w[2] * p[2 * stride] + w[3] * p[3 * stride];
}

Field ColumnInterp::apply(const Field& f, const GridPtr& target, bool hold_tail) const {
  if (target->ny() != size()) throw std::invalid_argument("ColumnInterp: target ny mismatch");
  if (target->nx() != f.nx()) throw std::invalid_argument("ColumnInterp: nx mismatch");
  Field out(target, f.label());
  const int nx = f.nx();
  const int last = f.ny() - 1;
  for (int q = 0; q < size(); ++q) {
    double* o = out.row(q);
    if (outside_[q]) {
      if (hold_tail)
        for (int i = 0; i < nx; ++i) o[i] = f(i, last);
      continue;
    }
    const auto& w = w_[q];
    const double* r0 = f.row(start_[q]);
    const double* r1 = r0 + nx;
    const double* r2 = r1 + nx;
    const double* r3 = r2 + nx;
    for (int i = 0; i < nx; ++i) o[i] = w[0] * r0[i] + w[1] * r1[i] + w[2] * r2[i] + w[3] * r3[i];
  }
  return out;
}

TimeStencil time_stencil(const std::vector<double>& times, double t) {
  const int n = static_cast<int>(times.size());
  if (n == 0) throw std::invalid_argument("time_stencil: no snapshots");
  double span = times.back() - times.front();
  double tol = 1e-9 * std::max(1.0, span);
  if (t < times.front() - tol || t > times.back() + tol)
    throw std::out_of_range("time_stencil: t=" + std::to_string(t) + " outside stored window [" +
                            std::to_string(times.front()) + ", " + std::to_string(times.back()) + "]");
  TimeStencil ts;
  // Exact hit: return the stored snapshot.
  for (int k = 0; k < n; ++k) {
    if (std::abs(times[k] - t) <= 1e-12 * std::max(1.0, span)) {
      ts.start = k;
      ts.count = 1;
      ts.w = {1.0, 0.0, 0.0, 0.0};
      return ts;
    }
  }
  if (n < 4) {
    // Linear fallback for very short series.
    int k = bracket(times, t);
    double a = (t - times[k]) / (times[k + 1] - times[k]);
    ts.start = k;
    ts.count = 2;
    ts.w = {1.0 - a, a, 0.0, 0.0};
    return ts;
  }
  int k = bracket(times, t);
  int s = std::clamp(k - 1, 0, n - 4);
  ts.start = s;
  ts.count = 4;
  ts.w = lagrange4(&times[s], t);
  return ts;
}

}  // namespace mhdbl
