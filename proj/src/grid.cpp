#include "mhdbl/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mhdbl/fd.hpp"

namespace mhdbl {

namespace {
bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

Grid::Grid(GridKind kind, int nx, int ny, double L, Stretching s, double beta)
    : kind_(kind), nx_(nx), ny_(ny), L_(L), stretching_(s), beta_(beta) {
  if (!is_pow2(nx) || nx < 8) throw std::invalid_argument("grid: nx must be a power of two >= 8, got " + std::to_string(nx));
  if (ny < 8) throw std::invalid_argument("grid: ny must be >= 8, got " + std::to_string(ny));
  if (!(L > 0.0)) throw std::invalid_argument("grid: L must be positive");
  if (kind == GridKind::BLGrid && s != Stretching::Uniform)
    throw std::invalid_argument("grid: BL grids are uniform in eta");
  if (s == Stretching::Tanh && !(beta > 0.0)) throw std::invalid_argument("grid: tanh stretching needs beta > 0");
  y_.resize(ny);
  const int N = ny - 1;
  for (int j = 0; j <= N; ++j) {
    double s01 = static_cast<double>(j) / N;
    if (s == Stretching::Uniform)
      y_[j] = L * s01;
    else
      y_[j] = L * (1.0 - std::tanh(beta * (1.0 - s01)) / std::tanh(beta));
  }
  y_[0] = 0.0;
  y_[N] = L;
  for (int j = 0; j < N; ++j)
    if (!(y_[j + 1] > y_[j])) throw std::invalid_argument("grid: y not strictly increasing");
  wy_.assign(ny, 0.0);
  for (int j = 0; j < N; ++j) {
    double d = y_[j + 1] - y_[j];
    wy_[j] += 0.5 * d;
    wy_[j + 1] += 0.5 * d;
  }
}

double Grid::x(int i) const { return 2.0 * std::numbers::pi * i / nx_; }
double Grid::dx() const { return 2.0 * std::numbers::pi / nx_; }

const YOperator& Grid::op(int deriv, int order) const {
  std::lock_guard<std::mutex> lk(mu_);
  auto key = std::make_pair(deriv, order);
  auto it = ops_.find(key);
  if (it != ops_.end()) return *it->second;
  auto p = std::make_shared<YOperator>(y_, deriv, order);
  ops_[key] = p;
  return *p;
}

bool Grid::same_shape(const Grid& o) const {
  if (nx_ != o.nx_ || ny_ != o.ny_ || kind_ != o.kind_) return false;
  for (int j = 0; j < ny_; ++j)
    if (y_[j] != o.y_[j]) return false;
  return true;
}

GridPtr make_grid2d(int nx, int ny, double Ly, Stretching s, double beta) {
  return std::make_shared<Grid>(GridKind::Grid2D, nx, ny, Ly, s, beta);
}

GridPtr make_blgrid(int nx, int neta, double Leta) {
  return std::make_shared<Grid>(GridKind::BLGrid, nx, neta, Leta, Stretching::Uniform, 0.0);
}

double tanh_dy0_bound(int ny, double Ly, double beta) {
  return Ly * std::tanh(beta / (ny - 1)) / std::tanh(beta);
}

GridPtr make_clustered_grid(int nx, int ny, double Ly, double dy0_max) {
  auto dy0 = [&](double beta) {
    double s = 1.0 / (ny - 1);
    return Ly * (1.0 - std::tanh(beta * (1.0 - s)) / std::tanh(beta));
  };
  if (Ly / (ny - 1) <= dy0_max) return make_grid2d(nx, ny, Ly);
  double lo = 1e-3, hi = 12.0;
  if (dy0(hi) > dy0_max)
    throw std::invalid_argument("clustered grid: ny=" + std::to_string(ny) +
                                " cannot reach first spacing " + std::to_string(dy0_max));
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (dy0(mid) > dy0_max) lo = mid; else hi = mid;
  }
  return make_grid2d(nx, ny, Ly, Stretching::Tanh, hi);
}

}  // namespace mhdbl
