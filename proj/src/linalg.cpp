#include "mhdbl/linalg.hpp"

#include <algorithm>
#include <string>

extern "C" {
void dgbtrf_(const int* m, const int* n, const int* kl, const int* ku, double* ab, const int* ldab,
             int* ipiv, int* info);
void dgbtrs_(const char* trans, const int* n, const int* kl, const int* ku, const int* nrhs,
             const double* ab, const int* ldab, const int* ipiv, double* b, const int* ldb,
             int* info);
}

namespace mhdbl {

BandMatrix::BandMatrix(int n, int kl, int ku) : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1) {
  if (n <= 0 || kl < 0 || ku < 0) throw std::invalid_argument("BandMatrix: bad dimensions");
  ab_.assign(static_cast<std::size_t>(ldab_) * n_, 0.0);
  ipiv_.assign(n_, 0);
}

double& BandMatrix::at(int i, int j) {
  if (factored_) throw std::logic_error("BandMatrix: modified after factorization");
  if (i < 0 || j < 0 || i >= n_ || j >= n_ || j - i > ku_ || i - j > kl_)
    throw std::out_of_range("BandMatrix: entry (" + std::to_string(i) + "," + std::to_string(j) +
                            ") outside band");
  return ab_[static_cast<std::size_t>(j) * ldab_ + (kl_ + ku_ + i - j)];
}

void BandMatrix::clear_row(int i) {
  for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j) at(i, j) = 0.0;
}

void BandMatrix::factor() {
  int info = 0;
  dgbtrf_(&n_, &n_, &kl_, &ku_, ab_.data(), &ldab_, ipiv_.data(), &info);
  if (info != 0) throw std::runtime_error("BandMatrix: singular matrix (dgbtrf info=" + std::to_string(info) + ")");
  factored_ = true;
}

void BandMatrix::solve(double* b, int nrhs) const {
  if (!factored_) throw std::logic_error("BandMatrix: solve before factor");
  int info = 0;
  const char tr = 'N';
  dgbtrs_(&tr, &n_, &kl_, &ku_, &nrhs, ab_.data(), &ldab_, ipiv_.data(), b, &n_, &info);
  if (info != 0) throw std::runtime_error("BandMatrix: dgbtrs failed");
}

void BandMatrix::solve(std::vector<std::complex<double>>& b) const {
  if (static_cast<int>(b.size()) != n_) throw std::invalid_argument("BandMatrix: rhs size mismatch");
  std::vector<double> tmp(2 * static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) {
    tmp[i] = b[i].real();
    tmp[n_ + i] = b[i].imag();
  }
  solve(tmp.data(), 2);
  for (int i = 0; i < n_; ++i) b[i] = {tmp[i], tmp[n_ + i]};
}

}  // namespace mhdbl
