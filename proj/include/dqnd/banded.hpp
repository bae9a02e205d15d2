#pragma once

// Diagonal-storage complex matrices for the large sector propagations.

#include <initializer_list>
#include <utility>
#include <vector>

#include "dqnd/hilbert.hpp"
#include "dqnd/kernels/kernels.hpp"

namespace dqnd {

class BandedMatrix {
 public:
  BandedMatrix() = default;

  /// Offsets are the distinct column - row values of the nonzeros, ascending.
  static BandedMatrix from_sparse(const SparseMatrix& m);
  /// Fixed offset layout; DimensionError if a nonzero lies off the listed bands.
  static BandedMatrix from_sparse(const SparseMatrix& m, const std::vector<std::ptrdiff_t>& offsets);

  Index size() const noexcept { return n_; }
  int bands() const noexcept { return int(offsets_.size()); }
  const std::vector<std::ptrdiff_t>& offsets() const noexcept { return offsets_; }
  cplx at(Index row, int band) const { return data_[std::size_t(band) * n_ + row]; }

  kernels::BandView view() const noexcept {
    return {n_, bands(), offsets_.data(), data_.data()};
  }

  void matvec(const Vector& x, Vector& y,
              const kernels::KernelTable& k = kernels::active()) const;

  /// Gershgorin interval (lo, hi) of a hermitian matrix.
  std::pair<double, double> spectral_bounds() const;

  /// this = sum_i c_i B_i; all terms must share this matrix's size and offsets.
  void assign_combination(std::initializer_list<std::pair<double, const BandedMatrix*>> terms);

 private:
  Index n_ = 0;
  std::vector<std::ptrdiff_t> offsets_;
  std::vector<cplx> data_;
};

}  // namespace dqnd
