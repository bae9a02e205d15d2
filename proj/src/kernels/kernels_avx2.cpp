#include "dqnd/kernels/kernels.hpp"

#if defined(DQND_HAVE_AVX2_TU)

#include <immintrin.h>

#include <algorithm>

namespace dqnd::kernels {

namespace {

// Two complex doubles per register, interleaved (re, im, re, im).
inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

inline __m256d cmul2(__m256d a, __m256d b) {
  const __m256d are = _mm256_movedup_pd(a);
  const __m256d aim = _mm256_permute_pd(a, 0xF);
  const __m256d bsw = _mm256_permute_pd(b, 0x5);
  return _mm256_fmaddsub_pd(are, b, _mm256_mul_pd(aim, bsw));
}

inline cplx cmul1(cplx a, cplx b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

// Rows [lo, hi) have every band's column inside [0, n).
void safe_rows(const BandView& a, std::ptrdiff_t& lo, std::ptrdiff_t& hi) {
  lo = 0;
  hi = a.n;
  for (int d = 0; d < a.bands; ++d) {
    lo = std::max(lo, -a.offsets[d]);
    hi = std::min(hi, a.n - a.offsets[d]);
  }
  lo = std::min(lo, a.n);
  if (hi < lo) hi = lo;
}

inline cplx row1(const BandView& a, const cplx* x, std::ptrdiff_t i) {
  cplx s{};
  for (int d = 0; d < a.bands; ++d) {
    const std::ptrdiff_t j = i + a.offsets[d];
    if (j >= 0 && j < a.n) s += cmul1(a.data[d * a.n + i], x[j]);
  }
  return s;
}

inline __m256d row2(const BandView& a, const cplx* x, std::ptrdiff_t i) {
  __m256d s = _mm256_setzero_pd();
  for (int d = 0; d < a.bands; ++d) {
    s = _mm256_add_pd(s, cmul2(load2(a.data + d * a.n + i), load2(x + i + a.offsets[d])));
  }
  return s;
}

void band_matvec(const BandView& a, const cplx* x, cplx* y) {
  std::ptrdiff_t lo, hi;
  safe_rows(a, lo, hi);
  std::ptrdiff_t i = 0;
  for (; i < lo; ++i) y[i] = row1(a, x, i);
  for (; i + 2 <= hi; i += 2) store2(y + i, row2(a, x, i));
  for (; i < a.n; ++i) y[i] = row1(a, x, i);
}

void cheb_step(const BandView& a, double alpha, double beta, const cplx* x, const cplx* z, cplx* y,
               cplx c, cplx* acc) {
  std::ptrdiff_t lo, hi;
  safe_rows(a, lo, hi);
  const __m256d va = _mm256_set1_pd(alpha);
  const __m256d vb = _mm256_set1_pd(beta);
  const __m256d vc = _mm256_setr_pd(c.real(), c.imag(), c.real(), c.imag());
  auto one = [&](std::ptrdiff_t i) {
    y[i] = alpha * row1(a, x, i) + beta * x[i] - z[i];
    acc[i] += cmul1(c, y[i]);
  };
  std::ptrdiff_t i = 0;
  for (; i < lo; ++i) one(i);
  for (; i + 2 <= hi; i += 2) {
    const __m256d t = _mm256_fmsub_pd(vb, load2(x + i), load2(z + i));
    const __m256d v = _mm256_fmadd_pd(va, row2(a, x, i), t);
    store2(y + i, v);
    store2(acc + i, _mm256_add_pd(load2(acc + i), cmul2(vc, v)));
  }
  for (; i < a.n; ++i) one(i);
}

void axpy(std::ptrdiff_t n, cplx c, const cplx* x, cplx* y) {
  const __m256d vc = _mm256_setr_pd(c.real(), c.imag(), c.real(), c.imag());
  std::ptrdiff_t i = 0;
  for (; i + 2 <= n; i += 2) store2(y + i, _mm256_add_pd(load2(y + i), cmul2(vc, load2(x + i))));
  for (; i < n; ++i) y[i] += cmul1(c, x[i]);
}

cplx dotc(std::ptrdiff_t n, const cplx* x, const cplx* y) {
  __m256d same = _mm256_setzero_pd();   // (xr yr, xi yi)
  __m256d cross = _mm256_setzero_pd();  // (xr yi, xi yr)
  std::ptrdiff_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = load2(x + i);
    const __m256d vy = load2(y + i);
    same = _mm256_fmadd_pd(vx, vy, same);
    cross = _mm256_fmadd_pd(vx, _mm256_permute_pd(vy, 0x5), cross);
  }
  alignas(32) double s[4], c[4];
  _mm256_store_pd(s, same);
  _mm256_store_pd(c, cross);
  double re = (s[0] + s[1]) + (s[2] + s[3]);
  double im = (c[0] - c[1]) + (c[2] - c[3]);
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable t{band_matvec, cheb_step, axpy, dotc, "avx2"};
  return &t;
}

}  // namespace dqnd::kernels

#else

namespace dqnd::kernels {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace dqnd::kernels

#endif
