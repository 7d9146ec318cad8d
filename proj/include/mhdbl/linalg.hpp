#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace mhdbl {

/// Thomas algorithm for a[i] x[i-1] + b[i] x[i] + c[i] x[i+1] = d[i].
/// a[0] and c[n-1] are ignored. d is overwritten with the solution.
template <class T>
void solve_tridiagonal(const std::vector<double>& a, const std::vector<double>& b,
                       const std::vector<double>& c, std::vector<T>& d) {
  const std::size_t n = b.size();
  if (a.size() != n || c.size() != n || d.size() != n)
    throw std::invalid_argument("solve_tridiagonal: size mismatch");
  std::vector<double> cp(n);
  double den = b[0];
  if (den == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
  cp[0] = c[0] / den;
  d[0] = d[0] / den;
  for (std::size_t i = 1; i < n; ++i) {
    den = b[i] - a[i] * cp[i - 1];
    if (den == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
    cp[i] = c[i] / den;
    d[i] = (d[i] - a[i] * d[i - 1]) / den;
  }
  for (std::size_t i = n - 1; i-- > 0;) d[i] -= cp[i] * d[i + 1];
}

/// Real banded matrix with LAPACK LU (partial pivoting).
class BandMatrix {
 public:
  BandMatrix() = default;
  BandMatrix(int n, int kl, int ku);

  int n() const { return n_; }
  /// Entry (i, j); throws if outside the band.
  double& at(int i, int j);
  void add(int i, int j, double v) { at(i, j) += v; }
  /// Zero row i inside the band.
  void clear_row(int i);

  void factor();
  bool factored() const { return factored_; }
  /// Solve in place for nrhs column-major right-hand sides.
  void solve(double* b, int nrhs = 1) const;
  void solve(std::vector<double>& b) const { solve(b.data(), 1); }
  /// Complex right-hand side with a real matrix: real and imaginary parts are
  /// solved as two columns.
  void solve(std::vector<std::complex<double>>& b) const;

 private:
  int n_ = 0, kl_ = 0, ku_ = 0, ldab_ = 0;
  std::vector<double> ab_;
  std::vector<int> ipiv_;
  bool factored_ = false;
};

}  // namespace mhdbl
