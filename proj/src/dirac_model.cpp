#include "dqnd/dirac_model.hpp"

#include <cmath>
#include <sstream>

namespace dqnd {

DiracParams DiracParams::from_epsilon(double epsilon) {
  if (!std::isfinite(epsilon) || epsilon <= 0.0) {
    std::ostringstream os;
    os << "relativistic parameter must be finite and positive, got " << epsilon;
    throw DomainError(os.str());
  }
  DiracParams p;
  p.epsilon = epsilon;
  p.mc2 = 1.0 / epsilon;
  p.eta = -kI * std::sqrt(2.0 / epsilon);
  p.x_zpt = 1.0 / std::sqrt(2.0);
  p.p_zpt = 1.0 / std::sqrt(2.0);
  return p;
}

double level_root(double n, double epsilon) { return std::sqrt(1.0 + 2.0 * n * epsilon); }

double analytic_energy(int n, Branch branch, const DiracParams& p) {
  if (n < 0) throw DomainError("level index must be >= 0, got " + std::to_string(n));
  if (branch == Branch::Plus) return p.mc2 * level_root(n, p.epsilon);
  return -p.mc2 * level_root(n + 1.0, p.epsilon);
}

std::pair<double, double> dressed_ab(int n, double epsilon) {
  if (n <= 0) return {1.0, 0.0};
  const double s = level_root(n, epsilon);
  // B^2 = (s - 1) / 2s written without the cancellation in s - 1
  const double b2 = n * epsilon / (s * (s + 1.0));
  const double a2 = 0.5 * (1.0 + 1.0 / s);
  return {std::sqrt(a2), std::sqrt(b2)};
}

DressedCoeffs dressed_coeffs(int n, const DiracParams& p) {
  if (n < 1) {
    throw DomainError("dressed coefficients need n >= 1 (|E_0^+> is |0,up>), got " +
                      std::to_string(n));
  }
  const auto [a, b] = dressed_ab(n, p.epsilon);
  return {n, a, b};
}

void require_dirac_space(const SpaceDescriptor& space) {
  if (!space.dirac_spin()) throw ConfigError("space needs a dirac spin factor");
}

SparseMatrix build_h_dirac_sparse(const DiracParams& p, const SpaceDescriptor& space,
                                  bool coupling) {
  require_dirac_space(space);
  const int N = space.osc_dim();
  SparseMatrix osc_a = local::annihilation(N);
  SparseMatrix osc_ad = SparseMatrix(osc_a.adjoint());
  SparseMatrix sm = local::pauli(PauliAxis::Minus);
  SparseMatrix sp = local::pauli(PauliAxis::Plus);
  SparseMatrix sz = local::pauli(PauliAxis::Z);

  SparseMatrix h = p.mc2 * embed_sparse(space, Factor::DiracSpin, sz);
  if (coupling) {
    h += p.eta * embed_sparse(space, {{Factor::Oscillator, &osc_a}, {Factor::DiracSpin, &sm}});
    h += std::conj(p.eta) *
         embed_sparse(space, {{Factor::Oscillator, &osc_ad}, {Factor::DiracSpin, &sp}});
  }
  h.makeCompressed();
  return h;
}

Operator build_h_dirac(const DiracParams& p, const SpaceDescriptor& space, bool coupling) {
  return {space, Matrix(build_h_dirac_sparse(p, space, coupling))};
}

StateVector dressed_state(int n, Branch branch, const DiracParams& p, const SpaceDescriptor& space) {
  require_dirac_space(space);
  if (space.has(Factor::ProbeBoson) || space.has(Factor::ProbeSpin)) {
    throw ConfigError("dressed states live on oscillator (x) dirac spin only");
  }
  if (n < 0) throw DomainError("level index must be >= 0, got " + std::to_string(n));
  if (n + 1 >= space.osc_dim()) {
    throw TruncationError("dressed state n = " + std::to_string(n) + " needs osc_dim > " +
                              std::to_string(n + 1),
                          n + 2);
  }
  Vector v = Vector::Zero(space.dim());
  if (branch == Branch::Plus) {
    const auto [a, b] = dressed_ab(n, p.epsilon);
    v(space.index(n, 0)) = a;
    if (n > 0) v(space.index(n - 1, 1)) = -kI * b;
  } else {
    const auto [a, b] = dressed_ab(n + 1, p.epsilon);
    v(space.index(n + 1, 0)) = b;
    v(space.index(n, 1)) = kI * a;
  }
  return StateVector::normalized(space, std::move(v));
}

}  // namespace dqnd
