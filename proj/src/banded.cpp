#include "dqnd/banded.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace dqnd {

BandedMatrix BandedMatrix::from_sparse(const SparseMatrix& m) {
  std::set<std::ptrdiff_t> offs;
  for (Index r = 0; r < m.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) offs.insert(it.col() - it.row());
  }
  return from_sparse(m, std::vector<std::ptrdiff_t>(offs.begin(), offs.end()));
}

BandedMatrix BandedMatrix::from_sparse(const SparseMatrix& m,
                                       const std::vector<std::ptrdiff_t>& offsets) {
  if (m.rows() != m.cols()) throw DimensionError("banded storage needs a square matrix");
  BandedMatrix b;
  b.n_ = m.rows();
  b.offsets_ = offsets;
  b.data_.assign(std::size_t(b.n_) * offsets.size(), cplx{});
  for (Index r = 0; r < m.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      const std::ptrdiff_t off = it.col() - it.row();
      auto pos = std::lower_bound(offsets.begin(), offsets.end(), off);
      if (pos == offsets.end() || *pos != off) {
        if (it.value() == cplx{}) continue;
        throw DimensionError("nonzero on diagonal " + std::to_string(off) +
                             " outside the banded layout");
      }
      b.data_[std::size_t(pos - offsets.begin()) * b.n_ + it.row()] = it.value();
    }
  }
  return b;
}

void BandedMatrix::matvec(const Vector& x, Vector& y, const kernels::KernelTable& k) const {
  if (x.size() != n_) throw DimensionError("banded matvec: size mismatch");
  y.resize(n_);
  k.band_matvec(view(), x.data(), y.data());
}

std::pair<double, double> BandedMatrix::spectral_bounds() const {
  double lo = 1e300, hi = -1e300;
  for (Index i = 0; i < n_; ++i) {
    double centre = 0.0, radius = 0.0;
    for (int d = 0; d < bands(); ++d) {
      const std::ptrdiff_t j = i + offsets_[d];
      if (j < 0 || j >= n_) continue;
      const cplx v = at(i, d);
      if (offsets_[d] == 0) {
        centre = v.real();
      } else {
        radius += std::abs(v);
      }
    }
    lo = std::min(lo, centre - radius);
    hi = std::max(hi, centre + radius);
  }
  if (n_ == 0) return {0.0, 0.0};
  return {lo, hi};
}

void BandedMatrix::assign_combination(
    std::initializer_list<std::pair<double, const BandedMatrix*>> terms) {
  std::fill(data_.begin(), data_.end(), cplx{});
  for (const auto& [c, b] : terms) {
    if (b->n_ != n_ || b->offsets_ != offsets_) {
      throw DimensionError("banded combination: layouts differ");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += c * b->data_[i];
  }
}

}  // namespace dqnd
