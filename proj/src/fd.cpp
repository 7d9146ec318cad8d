#include "mhdbl/fd.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mhdbl {

std::vector<double> fornberg_weights(double x0, const double* x, int n, int m) {
  // c[k][j] holds weights of node j for derivative k.
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    int mn = std::min(i, m);
    double c2 = 1.0;
    double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c[m];
}

YOperator::YOperator(const std::vector<double>& y, int deriv, int order)
    : n_(static_cast<int>(y.size())) {
  if (deriv < 1 || deriv > 2) throw std::invalid_argument("YOperator: deriv must be 1 or 2");
  if (order != 2 && order != 4) throw std::invalid_argument("YOperator: order must be 2 or 4");
  // Centered stencils of order p need p+1 points for the first derivative and
  // p+1 for the second on the interior; one-sided closures need one extra point
  // for the second derivative to keep the order.
  int interior = order + 1;
  width_ = (deriv == 1) ? interior : interior + 1;
  if (n_ < width_)
    throw std::invalid_argument("YOperator: ny=" + std::to_string(n_) +
                                " below stencil width " + std::to_string(width_));
  int half = order / 2;
  start_.resize(n_);
  count_.resize(n_);
  w_.assign(static_cast<std::size_t>(n_) * width_, 0.0);
  for (int j = 0; j < n_; ++j) {
    int s, cnt;
    if (j >= half && j < n_ - half) {
      s = j - half;
      cnt = interior;
    } else {
      cnt = width_;
      s = (j < half) ? 0 : n_ - cnt;
    }
    start_[j] = s;
    count_[j] = cnt;
    auto wt = fornberg_weights(y[j], &y[s], cnt, deriv);
    std::copy(wt.begin(), wt.end(), w_.begin() + static_cast<std::size_t>(j) * width_);
  }
}

double YOperator::apply_row(const double* f, int j, int stride) const {
  const double* wj = w(j);
  const double* fj = f + static_cast<std::ptrdiff_t>(start_[j]) * stride;
  double s = 0.0;
  for (int k = 0; k < count_[j]; ++k) s += wj[k] * fj[static_cast<std::ptrdiff_t>(k) * stride];
  return s;
}

void YOperator::apply(const double* f, double* out, int stride) const {
  for (int j = 0; j < n_; ++j) out[static_cast<std::ptrdiff_t>(j) * stride] = apply_row(f, j, stride);
}

}  // namespace mhdbl
