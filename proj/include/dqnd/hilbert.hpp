#pragma once

// Truncated Fock (x) spin Hilbert spaces, dense operators and states.
//
// Factor order is fixed: oscillator (x) dirac-spin (x) probe-boson (x) probe-spin,
// with the oscillator index most significant. Spin basis index 0 is |up>, 1 is |down>.
// Everything is in natural units hbar = m = omega = 1.

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <functional>
#include <initializer_list>
#include <optional>
#include <utility>
#include <vector>

#include "dqnd/errors.hpp"

namespace dqnd {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using Index = Eigen::Index;

inline constexpr cplx kI{0.0, 1.0};

enum class Factor { Oscillator, DiracSpin, ProbeBoson, ProbeSpin };
enum class Boson { Oscillator, Probe };
enum class Spin { Dirac, Probe };
enum class PauliAxis { X, Y, Z, Plus, Minus };

class SpaceDescriptor {
 public:
  int osc_dim() const noexcept { return osc_dim_; }
  bool dirac_spin() const noexcept { return dirac_spin_; }
  int probe_boson_dim() const noexcept { return probe_boson_dim_; }
  bool probe_spin() const noexcept { return probe_spin_; }

  bool has(Factor f) const noexcept { return factor_dim(f) > 1; }
  /// 1 for an absent factor.
  int factor_dim(Factor f) const noexcept;
  Index dim() const noexcept;

  /// Stride of one step in factor `f` within the flat index.
  Index stride(Factor f) const noexcept;

  Index index(int n, int s = 0, int b = 0, int ps = 0) const noexcept;

  struct Coords {
    int n, s, b, ps;
  };
  Coords coords(Index i) const noexcept;

  bool operator==(const SpaceDescriptor&) const = default;

 private:
  SpaceDescriptor(int osc, bool ds, int pb, bool ps)
      : osc_dim_(osc), dirac_spin_(ds), probe_boson_dim_(pb), probe_spin_(ps) {}
  friend SpaceDescriptor make_space(int, bool, int, bool);

  int osc_dim_;
  bool dirac_spin_;
  int probe_boson_dim_;
  bool probe_spin_;
};

/// Throws ConfigError if osc_dim < 2 or probe_boson_dim is 1 or negative.
SpaceDescriptor make_space(int osc_dim, bool dirac_spin, int probe_boson_dim = 0,
                           bool probe_spin = false);

class Operator {
 public:
  Operator(SpaceDescriptor space, Matrix m);

  static Operator identity(const SpaceDescriptor& space);
  static Operator zero(const SpaceDescriptor& space);

  const SpaceDescriptor& space() const noexcept { return space_; }
  const Matrix& matrix() const noexcept { return m_; }

  Operator adjoint() const { return {space_, m_.adjoint()}; }
  /// max |M - M^dagger|
  double hermiticity_defect() const;
  bool is_hermitian(double tol = 1e-12) const { return hermiticity_defect() <= tol; }
  /// Throws ContractError when the defect exceeds `tol`.
  const Operator& assert_hermitian(double tol = 1e-12) const;

  Operator& operator+=(const Operator& o);
  Operator& operator-=(const Operator& o);
  Operator& operator*=(cplx s) {
    m_ *= s;
    return *this;
  }

  friend Operator operator+(Operator a, const Operator& b) { return a += b; }
  friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
  friend Operator operator*(const Operator& a, const Operator& b);
  friend Operator operator*(cplx s, Operator a) { return a *= s; }
  friend Operator operator*(Operator a, cplx s) { return a *= s; }

 private:
  SpaceDescriptor space_;
  Matrix m_;
};

class StateVector {
 public:
  /// Throws ContractError unless ||amplitudes|| = 1 within 1e-12.
  StateVector(SpaceDescriptor space, Vector amplitudes);
  /// Normalizes `amplitudes`; throws ContractError on a zero vector.
  static StateVector normalized(SpaceDescriptor space, Vector amplitudes);

  const SpaceDescriptor& space() const noexcept { return space_; }
  const Vector& amplitudes() const noexcept { return amps_; }
  cplx amplitude(Index i) const { return amps_(i); }

 private:
  struct NoCheck {};
  StateVector(SpaceDescriptor space, Vector amplitudes, NoCheck)
      : space_(std::move(space)), amps_(std::move(amplitudes)) {}

  SpaceDescriptor space_;
  Vector amps_;
};

// ---- factor-local building blocks -------------------------------------------------

namespace local {

/// Truncated annihilation operator, <n-1|a|n> = sqrt(n).
SparseMatrix annihilation(int dim);
/// diag(f(0), ..., f(dim-1))
SparseMatrix diagonal(int dim, const std::function<cplx(int)>& f);
SparseMatrix pauli(PauliAxis axis);
SparseMatrix identity(int dim);

}  // namespace local

/// Kronecker product over all factors of `space`; factors not listed get the identity.
SparseMatrix embed_sparse(const SpaceDescriptor& space,
                          std::initializer_list<std::pair<Factor, const SparseMatrix*>> parts);
SparseMatrix embed_sparse(const SpaceDescriptor& space, Factor f, const SparseMatrix& local);
Operator embed(const SpaceDescriptor& space, Factor f, const SparseMatrix& local);
/// block (x) identity, where `block` acts on the leading factors (e.g. oscillator (x) dirac spin).
SparseMatrix embed_leading(const SpaceDescriptor& space, const SparseMatrix& block);
Operator embed(const SpaceDescriptor& space,
               std::initializer_list<std::pair<Factor, const SparseMatrix*>> parts);

// ---- operators --------------------------------------------------------------------

/// (annihilation, creation) for the requested bosonic factor. ConfigError if absent.
std::pair<Operator, Operator> ladder(const SpaceDescriptor& space, Boson which);
Operator number(const SpaceDescriptor& space, Boson which);
Operator pauli(const SpaceDescriptor& space, PauliAxis axis, Spin which);
/// x = x_zpt (a + a^dagger) of the oscillator.
Operator position(const SpaceDescriptor& space);
/// p = -i p_zpt (a - a^dagger) of the oscillator.
Operator momentum(const SpaceDescriptor& space);

Operator commutator(const Operator& a, const Operator& b);

// ---- states -----------------------------------------------------------------------

/// Normalized coefficients alpha^n / sqrt(n!) over `dim` Fock states.
Vector coherent_amplitudes(int dim, cplx alpha);

/// Coherent state of the requested boson, ground (|0>, |up>) in every other factor.
/// Throws TruncationError when |alpha|^2 > dim / 4.
StateVector coherent_state(const SpaceDescriptor& space, Boson which, cplx alpha);

/// Product state from per-factor amplitude vectors (absent factors must be left empty).
StateVector product_state(const SpaceDescriptor& space, const Vector& osc, const Vector& dirac_spin,
                          const Vector& probe_boson = {}, const Vector& probe_spin = {});

cplx expectation(const StateVector& state, const Operator& op);
/// <O^2> - <O>^2, clamped to 0 if within -1e-12 of it.
double variance(const StateVector& state, const Operator& op);
double fidelity(const StateVector& a, const StateVector& b);

// ---- spectral functions -----------------------------------------------------------

/// What to do when f returns a non-finite value at an eigenvalue.
struct EdgeConvention {
  cplx value;
};

/// V f(D) V^dagger for hermitian `op` (to 1e-10). ContractError on non-hermitian input,
/// DomainError when f is undefined at an eigenvalue and no convention is given.
Operator apply_function(const Operator& op, const std::function<cplx(double)>& f,
                        std::optional<EdgeConvention> edge = std::nullopt);

// ---- interior projector -----------------------------------------------------------

/// Flat indices with lo <= n <= hi_fraction * osc_dim (all other factors kept).
/// Optionally drops |0,up> (only relevant when lo == 0).
std::vector<Index> interior_indices(const SpaceDescriptor& space, int lo = 2,
                                    double hi_fraction = 0.9, bool exclude_ground_up = true);

/// max |M_ij| over i, j in `idx`.
double interior_max_abs(const Matrix& m, const std::vector<Index>& idx);
inline double interior_max_abs(const Operator& op, const std::vector<Index>& idx) {
  return interior_max_abs(op.matrix(), idx);
}
/// max |M_ij - delta_ij * diag| over the interior block.
double interior_deviation_from_scalar(const Matrix& m, cplx diag, const std::vector<Index>& idx);
double interior_deviation_from_scalar(const SparseMatrix& m, cplx diag, const std::vector<Index>& idx);

}  // namespace dqnd
