#pragma once

#include <vector>

namespace mhdbl {

/// Fornberg weights for the m-th derivative at x0 from nodes x[0..n).
std::vector<double> fornberg_weights(double x0, const double* x, int n, int m);

/// Row-wise finite-difference stencils on a 1D nonuniform grid. Interior rows are
/// centered; rows near either end use one-sided stencils of the same order.
class YOperator {
 public:
  YOperator(const std::vector<double>& y, int deriv, int order);

  int n() const { return n_; }
  int width() const { return width_; }
  int start(int j) const { return start_[j]; }
  int count(int j) const { return count_[j]; }
  const double* w(int j) const { return &w_[static_cast<std::size_t>(j) * width_]; }

  /// out[j*stride] = sum_k w_jk f[(start+k)*stride]
  void apply(const double* f, double* out, int stride = 1) const;
  double apply_row(const double* f, int j, int stride = 1) const;

 private:
  int n_, width_;
  std::vector<int> start_;
  std::vector<int> count_;
  std::vector<double> w_;
};

}  // namespace mhdbl
