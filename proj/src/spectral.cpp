#include "mhdbl/spectral.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace mhdbl::spectral {

namespace {

struct Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

// Plan creation is not thread-safe in FFTW; execution with the new-array
// interface is.
std::mutex plan_mutex;
std::map<int, Plans> plan_cache;

const Plans& plans_for(int nx) {
  std::lock_guard<std::mutex> lk(plan_mutex);
  auto it = plan_cache.find(nx);
  if (it != plan_cache.end()) return it->second;
  std::vector<double> r(nx);
  std::vector<cplx> c(nmodes(nx));
  auto* cp = reinterpret_cast<fftw_complex*>(c.data());
  Plans p;
  p.r2c = fftw_plan_dft_r2c_1d(nx, r.data(), cp, FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.c2r = fftw_plan_dft_c2r_1d(nx, cp, r.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p.r2c || !p.c2r) throw std::runtime_error("spectral: FFTW plan creation failed");
  return plan_cache.emplace(nx, p).first->second;
}

}  // namespace

void forward(const double* in, cplx* out, int nx, int rows) {
  const Plans& p = plans_for(nx);
  int nm = nmodes(nx);
  for (int r = 0; r < rows; ++r)
    fftw_execute_dft_r2c(p.r2c, const_cast<double*>(in + static_cast<std::size_t>(r) * nx),
                         reinterpret_cast<fftw_complex*>(out + static_cast<std::size_t>(r) * nm));
}

void backward(const cplx* in, double* out, int nx, int rows) {
  const Plans& p = plans_for(nx);
  int nm = nmodes(nx);
  std::vector<cplx> tmp(nm);
  double s = 1.0 / nx;
  for (int r = 0; r < rows; ++r) {
    const cplx* src = in + static_cast<std::size_t>(r) * nm;
    // c2r overwrites its input.
    for (int k = 0; k < nm; ++k) tmp[k] = src[k];
    double* dst = out + static_cast<std::size_t>(r) * nx;
    fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(tmp.data()), dst);
    for (int i = 0; i < nx; ++i) dst[i] *= s;
  }
}

void deriv(const double* in, double* out, int nx, int rows, int m) {
  if (m != 1 && m != 2) throw std::invalid_argument("spectral::deriv: m must be 1 or 2");
  int nm = nmodes(nx);
  std::vector<cplx> c(static_cast<std::size_t>(nm) * rows);
  forward(in, c.data(), nx, rows);
  for (int r = 0; r < rows; ++r) {
    cplx* cr = c.data() + static_cast<std::size_t>(r) * nm;
    for (int k = 0; k < nm; ++k) {
      if (2 * k == nx) {
        cr[k] = 0.0;
        continue;
      }
      cr[k] *= (m == 1) ? cplx(0.0, k) : cplx(-static_cast<double>(k) * k, 0.0);
    }
  }
  backward(c.data(), out, nx, rows);
}

void dealias(double* f, int nx, int rows) {
  int nm = nmodes(nx);
  std::vector<cplx> c(static_cast<std::size_t>(nm) * rows);
  forward(f, c.data(), nx, rows);
  int kmax = nx / 3;
  for (int r = 0; r < rows; ++r)
    for (int k = kmax + 1; k < nm; ++k) c[static_cast<std::size_t>(r) * nm + k] = 0.0;
  backward(c.data(), f, nx, rows);
}

void inv_dx(const double* in, double* out, int nx, int rows) {
  int nm = nmodes(nx);
  std::vector<cplx> c(static_cast<std::size_t>(nm) * rows);
  forward(in, c.data(), nx, rows);
  for (int r = 0; r < rows; ++r) {
    cplx* cr = c.data() + static_cast<std::size_t>(r) * nm;
    cr[0] = 0.0;
    for (int k = 1; k < nm; ++k) cr[k] = (2 * k == nx) ? cplx(0.0) : cr[k] / cplx(0.0, k);
  }
  backward(c.data(), out, nx, rows);
}

std::vector<double> row_means(const double* in, int nx, int rows) {
  std::vector<double> m(rows, 0.0);
  for (int r = 0; r < rows; ++r) {
    double s = 0.0;
    for (int i = 0; i < nx; ++i) s += in[static_cast<std::size_t>(r) * nx + i];
    m[r] = s / nx;
  }
  return m;
}

}  // namespace mhdbl::spectral
