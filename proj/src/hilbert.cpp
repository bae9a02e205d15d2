#include "dqnd/hilbert.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dqnd {

int SpaceDescriptor::factor_dim(Factor f) const noexcept {
  switch (f) {
    case Factor::Oscillator: return osc_dim_;
    case Factor::DiracSpin: return dirac_spin_ ? 2 : 1;
    case Factor::ProbeBoson: return probe_boson_dim_ > 0 ? probe_boson_dim_ : 1;
    case Factor::ProbeSpin: return probe_spin_ ? 2 : 1;
  }
  return 1;
}

Index SpaceDescriptor::dim() const noexcept {
  return Index(osc_dim_) * factor_dim(Factor::DiracSpin) * factor_dim(Factor::ProbeBoson) *
         factor_dim(Factor::ProbeSpin);
}

Index SpaceDescriptor::stride(Factor f) const noexcept {
  const Index ps = factor_dim(Factor::ProbeSpin);
  const Index pb = factor_dim(Factor::ProbeBoson);
  const Index ds = factor_dim(Factor::DiracSpin);
  switch (f) {
    case Factor::ProbeSpin: return 1;
    case Factor::ProbeBoson: return ps;
    case Factor::DiracSpin: return ps * pb;
    case Factor::Oscillator: return ps * pb * ds;
  }
  return 1;
}

Index SpaceDescriptor::index(int n, int s, int b, int ps) const noexcept {
  return n * stride(Factor::Oscillator) + s * stride(Factor::DiracSpin) +
         b * stride(Factor::ProbeBoson) + ps;
}

SpaceDescriptor::Coords SpaceDescriptor::coords(Index i) const noexcept {
  Coords c{};
  c.ps = int(i % factor_dim(Factor::ProbeSpin));
  i /= factor_dim(Factor::ProbeSpin);
  c.b = int(i % factor_dim(Factor::ProbeBoson));
  i /= factor_dim(Factor::ProbeBoson);
  c.s = int(i % factor_dim(Factor::DiracSpin));
  c.n = int(i / factor_dim(Factor::DiracSpin));
  return c;
}

SpaceDescriptor make_space(int osc_dim, bool dirac_spin, int probe_boson_dim, bool probe_spin) {
  if (osc_dim < 2) {
    throw ConfigError("oscillator cutoff must be >= 2, got " + std::to_string(osc_dim));
  }
  if (probe_boson_dim < 0 || probe_boson_dim == 1) {
    throw ConfigError("probe boson cutoff must be 0 (absent) or >= 2, got " +
                      std::to_string(probe_boson_dim));
  }
  return SpaceDescriptor(osc_dim, dirac_spin, probe_boson_dim, probe_spin);
}

// ---- Operator -----------------------------------------------------------------------

namespace {

void require_same_space(const SpaceDescriptor& a, const SpaceDescriptor& b, const char* what) {
  if (!(a == b)) {
    std::ostringstream os;
    os << what << ": space mismatch (" << a.dim() << " vs " << b.dim() << ")";
    throw DimensionError(os.str());
  }
}

}  // namespace

Operator::Operator(SpaceDescriptor space, Matrix m) : space_(std::move(space)), m_(std::move(m)) {
  if (m_.rows() != space_.dim() || m_.cols() != space_.dim()) {
    std::ostringstream os;
    os << "operator matrix is " << m_.rows() << "x" << m_.cols() << ", space has dimension "
       << space_.dim();
    throw DimensionError(os.str());
  }
}

Operator Operator::identity(const SpaceDescriptor& space) {
  return {space, Matrix::Identity(space.dim(), space.dim())};
}

Operator Operator::zero(const SpaceDescriptor& space) {
  return {space, Matrix::Zero(space.dim(), space.dim())};
}

double Operator::hermiticity_defect() const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

const Operator& Operator::assert_hermitian(double tol) const {
  const double d = hermiticity_defect();
  if (d > tol) {
    std::ostringstream os;
    os << "operator is not hermitian: max|M - M^dagger| = " << d << " > " << tol;
    throw ContractError(os.str());
  }
  return *this;
}

Operator& Operator::operator+=(const Operator& o) {
  require_same_space(space_, o.space_, "operator +");
  m_ += o.m_;
  return *this;
}

Operator& Operator::operator-=(const Operator& o) {
  require_same_space(space_, o.space_, "operator -");
  m_ -= o.m_;
  return *this;
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same_space(a.space_, b.space_, "operator *");
  return {a.space_, a.m_ * b.m_};
}

// ---- StateVector ---------------------------------------------------------------------

StateVector::StateVector(SpaceDescriptor space, Vector amplitudes)
    : space_(std::move(space)), amps_(std::move(amplitudes)) {
  if (amps_.size() != space_.dim()) {
    throw DimensionError("state has " + std::to_string(amps_.size()) +
                         " amplitudes, space has dimension " + std::to_string(space_.dim()));
  }
  const double n = amps_.norm();
  if (std::abs(n - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "state is not normalized: |psi| = " << n;
    throw ContractError(os.str());
  }
}

StateVector StateVector::normalized(SpaceDescriptor space, Vector amplitudes) {
  if (amplitudes.size() != space.dim()) {
    throw DimensionError("state has " + std::to_string(amplitudes.size()) +
                         " amplitudes, space has dimension " + std::to_string(space.dim()));
  }
  const double n = amplitudes.norm();
  if (!(n > 0.0)) throw ContractError("cannot normalize a zero state");
  amplitudes /= n;
  return StateVector(std::move(space), std::move(amplitudes), NoCheck{});
}

// ---- local blocks --------------------------------------------------------------------

namespace local {

SparseMatrix annihilation(int dim) {
  SparseMatrix a(dim, dim);
  a.reserve(Eigen::VectorXi::Constant(dim, 1));
  for (int n = 1; n < dim; ++n) a.insert(n - 1, n) = std::sqrt(double(n));
  a.makeCompressed();
  return a;
}

SparseMatrix diagonal(int dim, const std::function<cplx(int)>& f) {
  SparseMatrix d(dim, dim);
  d.reserve(Eigen::VectorXi::Constant(dim, 1));
  for (int n = 0; n < dim; ++n) {
    const cplx v = f(n);
    if (v != cplx{}) d.insert(n, n) = v;
  }
  d.makeCompressed();
  return d;
}

SparseMatrix pauli(PauliAxis axis) {
  SparseMatrix s(2, 2);
  switch (axis) {
    case PauliAxis::X:
      s.insert(0, 1) = 1.0;
      s.insert(1, 0) = 1.0;
      break;
    case PauliAxis::Y:
      s.insert(0, 1) = -kI;
      s.insert(1, 0) = kI;
      break;
    case PauliAxis::Z:
      s.insert(0, 0) = 1.0;
      s.insert(1, 1) = -1.0;
      break;
    case PauliAxis::Plus:  // |down> -> |up>
      s.insert(0, 1) = 1.0;
      break;
    case PauliAxis::Minus:
      s.insert(1, 0) = 1.0;
      break;
  }
  s.makeCompressed();
  return s;
}

SparseMatrix identity(int dim) {
  SparseMatrix id(dim, dim);
  id.setIdentity();
  return id;
}

}  // namespace local

// ---- embedding -----------------------------------------------------------------------

SparseMatrix embed_sparse(const SpaceDescriptor& space,
                          std::initializer_list<std::pair<Factor, const SparseMatrix*>> parts) {
  static constexpr Factor order[] = {Factor::Oscillator, Factor::DiracSpin, Factor::ProbeBoson,
                                     Factor::ProbeSpin};
  for (const auto& [f, m] : parts) {
    if (!space.has(f)) throw ConfigError("requested factor is absent from the space");
    const int d = space.factor_dim(f);
    if (m->rows() != d || m->cols() != d) {
      throw DimensionError("local operator does not match its factor dimension");
    }
  }
  SparseMatrix acc;
  bool first = true;
  for (Factor f : order) {
    if (!space.has(f)) continue;
    const SparseMatrix* m = nullptr;
    for (const auto& [pf, pm] : parts) {
      if (pf == f) m = pm;
    }
    SparseMatrix block = m ? *m : local::identity(space.factor_dim(f));
    if (first) {
      acc = std::move(block);
      first = false;
    } else {
      SparseMatrix k = Eigen::kroneckerProduct(acc, block);
      acc = std::move(k);
    }
  }
  acc.makeCompressed();
  return acc;
}

SparseMatrix embed_sparse(const SpaceDescriptor& space, Factor f, const SparseMatrix& m) {
  return embed_sparse(space, {{f, &m}});
}

SparseMatrix embed_leading(const SpaceDescriptor& space, const SparseMatrix& block) {
  if (block.rows() != block.cols() || block.rows() == 0 || space.dim() % block.rows() != 0) {
    throw DimensionError("leading block does not divide the space dimension");
  }
  const Index rest = space.dim() / block.rows();
  if (rest == 1) return block;
  SparseMatrix k = Eigen::kroneckerProduct(block, local::identity(int(rest)));
  k.makeCompressed();
  return k;
}

Operator embed(const SpaceDescriptor& space, Factor f, const SparseMatrix& m) {
  return {space, Matrix(embed_sparse(space, f, m))};
}

Operator embed(const SpaceDescriptor& space,
               std::initializer_list<std::pair<Factor, const SparseMatrix*>> parts) {
  return {space, Matrix(embed_sparse(space, parts))};
}

// ---- operators -----------------------------------------------------------------------

namespace {

Factor boson_factor(const SpaceDescriptor& space, Boson which) {
  const Factor f = which == Boson::Oscillator ? Factor::Oscillator : Factor::ProbeBoson;
  if (!space.has(f)) {
    throw ConfigError(which == Boson::Oscillator ? "oscillator factor absent"
                                                 : "probe boson factor absent");
  }
  return f;
}

Factor spin_factor(const SpaceDescriptor& space, Spin which) {
  const Factor f = which == Spin::Dirac ? Factor::DiracSpin : Factor::ProbeSpin;
  if (!space.has(f)) {
    throw ConfigError(which == Spin::Dirac ? "dirac spin factor absent"
                                           : "probe spin factor absent");
  }
  return f;
}

}  // namespace

std::pair<Operator, Operator> ladder(const SpaceDescriptor& space, Boson which) {
  const Factor f = boson_factor(space, which);
  Operator a = embed(space, f, local::annihilation(space.factor_dim(f)));
  Operator ad = a.adjoint();
  return {std::move(a), std::move(ad)};
}

Operator number(const SpaceDescriptor& space, Boson which) {
  const Factor f = boson_factor(space, which);
  return embed(space, f, local::diagonal(space.factor_dim(f), [](int n) { return cplx(n); }));
}

Operator pauli(const SpaceDescriptor& space, PauliAxis axis, Spin which) {
  return embed(space, spin_factor(space, which), local::pauli(axis));
}

Operator position(const SpaceDescriptor& space) {
  auto [a, ad] = ladder(space, Boson::Oscillator);
  return (a + ad) * cplx(1.0 / std::sqrt(2.0));
}

Operator momentum(const SpaceDescriptor& space) {
  auto [a, ad] = ladder(space, Boson::Oscillator);
  return (a - ad) * (-kI / std::sqrt(2.0));
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

// ---- states --------------------------------------------------------------------------

Vector coherent_amplitudes(int dim, cplx alpha) {
  Vector c = Vector::Zero(dim);
  const double r = std::abs(alpha);
  if (r == 0.0) {
    c(0) = 1.0;
    return c;
  }
  // log-space weights avoid overflow of alpha^n / sqrt(n!) for large excitations
  const double lr = std::log(r);
  const double phase = std::arg(alpha);
  std::vector<double> logw(dim);
  double maxw = -1e300;
  for (int n = 0; n < dim; ++n) {
    logw[n] = n * lr - 0.5 * std::lgamma(n + 1.0);
    maxw = std::max(maxw, logw[n]);
  }
  for (int n = 0; n < dim; ++n) {
    c(n) = std::exp(logw[n] - maxw) * std::polar(1.0, n * phase);
  }
  c /= c.norm();
  return c;
}

StateVector coherent_state(const SpaceDescriptor& space, Boson which, cplx alpha) {
  const Factor f = boson_factor(space, which);
  const int dim = space.factor_dim(f);
  if (std::norm(alpha) > dim / 4.0) {
    const int suggested = int(std::ceil(4.0 * std::norm(alpha)));
    throw TruncationError("coherent amplitude |alpha|^2 = " + std::to_string(std::norm(alpha)) +
                              " exceeds cutoff/4; use a cutoff of at least " +
                              std::to_string(suggested),
                          suggested);
  }
  const Vector c = coherent_amplitudes(dim, alpha);
  auto ground = [](int d) {
    Vector v = Vector::Zero(d);
    v(0) = 1.0;
    return v;
  };
  Vector osc = f == Factor::Oscillator ? c : ground(space.osc_dim());
  Vector ds = space.dirac_spin() ? ground(2) : Vector{};
  Vector pb;
  if (space.has(Factor::ProbeBoson)) pb = f == Factor::ProbeBoson ? c : ground(space.probe_boson_dim());
  Vector ps = space.probe_spin() ? ground(2) : Vector{};
  return product_state(space, osc, ds, pb, ps);
}

StateVector product_state(const SpaceDescriptor& space, const Vector& osc, const Vector& dirac_spin,
                          const Vector& probe_boson, const Vector& probe_spin) {
  auto check = [&](Factor f, const Vector& v, const char* name) {
    const Index want = space.has(f) ? space.factor_dim(f) : 0;
    if (v.size() != want) {
      throw DimensionError(std::string(name) + " amplitudes have size " +
                           std::to_string(v.size()) + ", expected " + std::to_string(want));
    }
  };
  check(Factor::Oscillator, osc, "oscillator");
  check(Factor::DiracSpin, dirac_spin, "dirac spin");
  check(Factor::ProbeBoson, probe_boson, "probe boson");
  check(Factor::ProbeSpin, probe_spin, "probe spin");

  Vector acc = osc;
  for (const Vector* v : {&dirac_spin, &probe_boson, &probe_spin}) {
    if (v->size() == 0) continue;
    Vector k = Eigen::kroneckerProduct(acc, *v);
    acc = std::move(k);
  }
  return StateVector::normalized(space, std::move(acc));
}

cplx expectation(const StateVector& state, const Operator& op) {
  require_same_space(state.space(), op.space(), "expectation");
  return state.amplitudes().dot(op.matrix() * state.amplitudes());
}

double variance(const StateVector& state, const Operator& op) {
  require_same_space(state.space(), op.space(), "variance");
  const Vector v = op.matrix() * state.amplitudes();
  const double mean = state.amplitudes().dot(v).real();
  double var = v.squaredNorm() - mean * mean;
  if (var < 0.0 && var > -1e-12) var = 0.0;
  return var;
}

double fidelity(const StateVector& a, const StateVector& b) {
  require_same_space(a.space(), b.space(), "fidelity");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

// ---- spectral functions ---------------------------------------------------------------

Operator apply_function(const Operator& op, const std::function<cplx(double)>& f,
                        std::optional<EdgeConvention> edge) {
  op.assert_hermitian(1e-10);
  // Symmetrize so round-off in the input does not leak into the eigenvectors.
  const Matrix h = 0.5 * (op.matrix() + op.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) throw AssemblyError("eigendecomposition failed");
  const auto& lam = es.eigenvalues();
  Vector fl(lam.size());
  for (Index i = 0; i < lam.size(); ++i) {
    cplx v = f(lam(i));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      if (!edge) {
        std::ostringstream os;
        os << "function undefined at eigenvalue " << lam(i);
        throw DomainError(os.str());
      }
      v = edge->value;
    }
    fl(i) = v;
  }
  const Matrix& V = es.eigenvectors();
  return {op.space(), V * fl.asDiagonal() * V.adjoint()};
}

// ---- interior --------------------------------------------------------------------------

std::vector<Index> interior_indices(const SpaceDescriptor& space, int lo, double hi_fraction,
                                    bool exclude_ground_up) {
  const int hi = std::min(space.osc_dim() - 1, int(std::floor(hi_fraction * space.osc_dim())));
  std::vector<Index> idx;
  for (Index i = 0; i < space.dim(); ++i) {
    const auto c = space.coords(i);
    if (c.n < lo || c.n > hi) continue;
    if (exclude_ground_up && space.dirac_spin() && c.n == 0 && c.s == 0) continue;
    idx.push_back(i);
  }
  return idx;
}

double interior_max_abs(const Matrix& m, const std::vector<Index>& idx) {
  double mx = 0.0;
  for (Index j : idx) {
    for (Index i : idx) mx = std::max(mx, std::abs(m(i, j)));
  }
  return mx;
}

double interior_deviation_from_scalar(const Matrix& m, cplx diag, const std::vector<Index>& idx) {
  double mx = 0.0;
  for (Index j : idx) {
    for (Index i : idx) {
      const cplx want = i == j ? diag : cplx{};
      mx = std::max(mx, std::abs(m(i, j) - want));
    }
  }
  return mx;
}

double interior_deviation_from_scalar(const SparseMatrix& m, cplx diag,
                                      const std::vector<Index>& idx) {
  std::vector<char> inside(m.rows(), 0);
  for (Index i : idx) inside[i] = 1;
  double mx = 0.0;
  for (Index i : idx) {
    bool seen_diag = false;
    for (SparseMatrix::InnerIterator it(m, i); it; ++it) {
      if (!inside[it.col()]) continue;
      const cplx want = it.col() == i ? diag : cplx{};
      if (it.col() == i) seen_diag = true;
      mx = std::max(mx, std::abs(it.value() - want));
    }
    if (!seen_diag) mx = std::max(mx, std::abs(diag));
  }
  return mx;
}

}  // namespace dqnd
