#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace mhdbl {

enum class GridKind : std::uint32_t { Grid2D = 0, BLGrid = 1 };
enum class Stretching : std::uint32_t { Uniform = 0, Tanh = 1 };

class YOperator;

/// Strip [0,2pi) x [0,L]: periodic in x, finite differences in the wall-normal
/// coordinate. For BL grids the wall-normal coordinate is the fast variable eta.
class Grid {
 public:
  Grid(GridKind kind, int nx, int ny, double L, Stretching s, double beta);

  GridKind kind() const { return kind_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double L() const { return L_; }
  Stretching stretching() const { return stretching_; }
  double beta() const { return beta_; }
  const std::vector<double>& y() const { return y_; }
  double y(int j) const { return y_[j]; }
  double x(int i) const;
  double dx() const;
  std::size_t size() const { return static_cast<std::size_t>(nx_) * ny_; }

  /// Trapezoidal weights in y.
  const std::vector<double>& wy() const { return wy_; }

  /// Cached finite-difference operator for d^deriv/dy^deriv at the given order.
  const YOperator& op(int deriv, int order) const;

  bool same_shape(const Grid& o) const;

 private:
  GridKind kind_;
  int nx_, ny_;
  double L_;
  Stretching stretching_;
  double beta_;
  std::vector<double> y_;
  std::vector<double> wy_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, int>, std::shared_ptr<YOperator>> ops_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// y_j = Ly (1 - tanh(beta (1 - j/(ny-1))) / tanh(beta)) for tanh clustering.
GridPtr make_grid2d(int nx, int ny, double Ly, Stretching s = Stretching::Uniform,
                    double beta = 0.0);
GridPtr make_blgrid(int nx, int neta, double Leta);

/// Tanh-clustered grid whose first spacing is at most dy0_max. Picks the
/// smallest beta that satisfies the bound; throws if even beta=12 is too weak.
GridPtr make_clustered_grid(int nx, int ny, double Ly, double dy0_max);

/// Upper bound on the first spacing for tanh clustering.
double tanh_dy0_bound(int ny, double Ly, double beta);

}  // namespace mhdbl
