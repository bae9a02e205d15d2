#include <algorithm>

#include "dqnd/kernels/kernels.hpp"

namespace dqnd::kernels {

namespace {

// Plain complex product; std::complex's operator* carries NaN recovery we do not need here.
inline cplx cmul(cplx a, cplx b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

inline cplx row(const BandView& a, const cplx* x, std::ptrdiff_t i) {
  cplx s{};
  for (int d = 0; d < a.bands; ++d) {
    const std::ptrdiff_t j = i + a.offsets[d];
    if (j >= 0 && j < a.n) s += cmul(a.data[d * a.n + i], x[j]);
  }
  return s;
}

void band_matvec(const BandView& a, const cplx* x, cplx* y) {
  for (std::ptrdiff_t i = 0; i < a.n; ++i) y[i] = row(a, x, i);
}

void cheb_step(const BandView& a, double alpha, double beta, const cplx* x, const cplx* z, cplx* y,
               cplx c, cplx* acc) {
  for (std::ptrdiff_t i = 0; i < a.n; ++i) {
    y[i] = alpha * row(a, x, i) + beta * x[i] - z[i];
    acc[i] += cmul(c, y[i]);
  }
}

void axpy(std::ptrdiff_t n, cplx c, const cplx* x, cplx* y) {
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] += cmul(c, x[i]);
}

cplx dotc(std::ptrdiff_t n, const cplx* x, const cplx* y) {
  double re = 0.0, im = 0.0;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{band_matvec, cheb_step, axpy, dotc, "scalar"};
  return t;
}

}  // namespace dqnd::kernels
