#pragma once

#include <complex>
#include <vector>

namespace mhdbl::spectral {

using cplx = std::complex<double>;

/// Number of stored r2c modes per row.
inline int nmodes(int nx) { return nx / 2 + 1; }

/// Row-wise real-to-complex transform of `rows` contiguous rows of length nx.
void forward(const double* in, cplx* out, int nx, int rows);
/// Inverse of forward, normalized so backward(forward(f)) == f.
void backward(const cplx* in, double* out, int nx, int rows);

/// m-th x-derivative (m = 1 or 2) on [0, 2pi). The Nyquist mode is dropped so
/// that applying m=1 twice equals m=2.
void deriv(const double* in, double* out, int nx, int rows, int m);

/// 2/3-rule: zero every mode with |k| > nx/3.
void dealias(double* f, int nx, int rows);

/// Zero-mean antiderivative in x. The mean of each input row is discarded.
void inv_dx(const double* in, double* out, int nx, int rows);

/// Mean over x of each row.
std::vector<double> row_means(const double* in, int nx, int rows);

}  // namespace mhdbl::spectral
