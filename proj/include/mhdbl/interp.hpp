#pragma once

#include <array>
#include <vector>

#include "mhdbl/field.hpp"

namespace mhdbl {

/// Four-point Lagrange weights at q for nodes x[s..s+3].
std::array<double, 4> lagrange4(const double* x, double q);

/// Precomputed cubic interpolation from a column grid `nodes` to query points.
/// Queries beyond the last node are flagged `outside`; the caller decides how
/// to extend (zero tail or held value).
class ColumnInterp {
 public:
  ColumnInterp(const std::vector<double>& nodes, const std::vector<double>& queries);

  int size() const { return static_cast<int>(start_.size()); }
  bool outside(int q) const { return outside_[q] != 0; }

  /// Interpolate a strided column.
  double apply(const double* f, int q, int stride = 1) const;

  /// Interpolate every x-column of f onto `target` (which must share nx).
  /// Outside queries take f's last row when hold_tail, otherwise zero.
  Field apply(const Field& f, const GridPtr& target, bool hold_tail) const;

 private:
  std::vector<int> start_;
  std::vector<std::array<double, 4>> w_;
  std::vector<char> outside_;
};

/// Cubic Lagrange weights over the (up to) four snapshot times nearest to t.
/// Returns start index and weights; exact at the nodes.
struct TimeStencil {
  int start = 0;
  int count = 0;
  std::array<double, 4> w{};
};
TimeStencil time_stencil(const std::vector<double>& times, double t);

}  // namespace mhdbl
