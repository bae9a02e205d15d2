#pragma once

// Complex banded (DIA) kernels with a portable scalar reference and an AVX2/FMA variant.
// The active variant is picked once at startup from CPUID; DIRAC_QND_SIMD=scalar forces the
// reference path.

#include <complex>
#include <cstddef>
#include <string_view>

namespace dqnd::kernels {

using cplx = std::complex<double>;

/// Diagonal storage: band d holds A(i, i + offsets[d]) at data[d * n + i]; entries whose column
/// falls outside [0, n) are ignored.
struct BandView {
  std::ptrdiff_t n;
  int bands;
  const std::ptrdiff_t* offsets;
  const cplx* data;
};

struct KernelTable {
  /// y = A x
  void (*band_matvec)(const BandView& a, const cplx* x, cplx* y);
  /// y = alpha (A x) + beta x - z, then acc += c y   (Chebyshev recurrence and partial sum)
  void (*cheb_step)(const BandView& a, double alpha, double beta, const cplx* x, const cplx* z,
                    cplx* y, cplx c, cplx* acc);
  /// y += c x
  void (*axpy)(std::ptrdiff_t n, cplx c, const cplx* x, cplx* y);
  /// sum conj(x_i) y_i
  cplx (*dotc)(std::ptrdiff_t n, const cplx* x, const cplx* y);
  const char* name;
};

const KernelTable& scalar_table();
/// nullptr when the AVX2 translation unit was not compiled in.
const KernelTable* avx2_table();

/// The table chosen for this process.
const KernelTable& active();
/// "scalar" or "avx2"
std::string_view active_name();

}  // namespace dqnd::kernels
