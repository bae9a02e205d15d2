#include "dqnd/fw.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace dqnd {

namespace {

using Triplets = std::vector<Eigen::Triplet<cplx>>;

// osc (x) dirac-spin local index
inline Index os(int n, int s) { return 2 * Index(n) + s; }

SparseMatrix from_triplets(Index dim, const Triplets& t) {
  SparseMatrix m(dim, dim);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

cplx corner_chi(double epsilon, const std::optional<EdgeConvention>& corner) {
  if (1.0 - 2.0 * epsilon >= 0.0) return chi(0, epsilon);
  if (!corner) {
    std::ostringstream os;
    os << "chi is undefined at n = 0 for epsilon = " << epsilon
       << " (1 - 2 epsilon < 0); restrict to n >= 1 or supply a corner value";
    throw DomainError(os.str());
  }
  return corner->value;
}

}  // namespace

SparseMatrix fw_unitary_sparse(const DiracParams& p, const SpaceDescriptor& space) {
  require_dirac_space(space);
  const int N = space.osc_dim();
  Triplets t;
  t.reserve(4 * N);
  for (int m = 0; m < N; ++m) {
    const auto [am, bm] = dressed_ab(m, p.epsilon);
    const auto [am1, bm1] = dressed_ab(m + 1, p.epsilon);
    t.emplace_back(os(m, 0), os(m, 0), am);
    t.emplace_back(os(m, 1), os(m, 1), -kI * am1);
    if (m + 1 < N) t.emplace_back(os(m + 1, 0), os(m, 1), kI * bm1);
    if (m >= 1) t.emplace_back(os(m - 1, 1), os(m, 0), bm);
  }
  return embed_leading(space, from_triplets(2 * Index(N), t));
}

FwUnitary build_fw_unitary(const DiracParams& p, const SpaceDescriptor& space) {
  SparseMatrix u = fw_unitary_sparse(p, space);
  const SpaceDescriptor local_space = make_space(space.osc_dim(), true);
  const SparseMatrix ul = fw_unitary_sparse(p, local_space);
  const SparseMatrix uu = ul * SparseMatrix(ul.adjoint());
  const double dev = interior_deviation_from_scalar(uu, 1.0, interior_indices(local_space));
  if (dev > 1e-8) {
    std::ostringstream os;
    os << "FW unitary fails interior unitarity by " << dev;
    throw AssemblyError(os.str());
  }
  return {Operator(space, Matrix(u)), p};
}

double fw_energy(int n, int spin, const DiracParams& p) {
  return spin == 0 ? p.mc2 * level_root(n, p.epsilon) : -p.mc2 * level_root(n + 1.0, p.epsilon);
}

SparseMatrix fw_hamiltonian_sparse(const DiracParams& p, const SpaceDescriptor& space) {
  require_dirac_space(space);
  const int N = space.osc_dim();
  Triplets t;
  for (int n = 0; n < N; ++n) {
    t.emplace_back(os(n, 0), os(n, 0), fw_energy(n, 0, p));
    t.emplace_back(os(n, 1), os(n, 1), fw_energy(n, 1, p));
  }
  return embed_leading(space, from_triplets(2 * Index(N), t));
}

Operator fw_hamiltonian(const DiracParams& p, const SpaceDescriptor& space) {
  return {space, Matrix(fw_hamiltonian_sparse(p, space))};
}

double fw_frequency(int n, int spin, double epsilon) {
  // mc^2 (s_n - s_{n-1}) = 2 / (s_n + s_{n-1}) since mc^2 eps = 1
  if (spin == 0) {
    if (n == 0) return 0.0;
    return 2.0 / (level_root(n, epsilon) + level_root(n - 1.0, epsilon));
  }
  return -2.0 / (level_root(n + 1.0, epsilon) + level_root(n, epsilon));
}

SparseMatrix frequency_general_sparse(const DiracParams& p, const SpaceDescriptor& space) {
  require_dirac_space(space);
  const int N = space.osc_dim();
  Triplets t;
  for (int n = 0; n < N; ++n) {
    if (n > 0) t.emplace_back(os(n, 0), os(n, 0), fw_frequency(n, 0, p.epsilon));
    t.emplace_back(os(n, 1), os(n, 1), fw_frequency(n, 1, p.epsilon));
  }
  return embed_leading(space, from_triplets(2 * Index(N), t));
}

FrequencyOperator frequency_operator_general(const DiracParams& p, const SpaceDescriptor& space) {
  return {Operator(space, Matrix(frequency_general_sparse(p, space))), FrequencyRegime::General};
}

Operator to_dirac(const Operator& op, const FwUnitary& u) {
  if (!(op.space() == u.u.space())) throw DimensionError("to_dirac: space mismatch");
  return {op.space(), u.u.matrix().adjoint() * op.matrix() * u.u.matrix()};
}

Operator to_fw(const Operator& op, const FwUnitary& u) {
  if (!(op.space() == u.u.space())) throw DimensionError("to_fw: space mismatch");
  return {op.space(), u.u.matrix() * op.matrix() * u.u.matrix().adjoint()};
}

std::pair<Operator, Operator> closed_form_transformed_ladder(const DiracParams& p,
                                                          const SpaceDescriptor& space) {
  require_dirac_space(space);
  const int N = space.osc_dim();
  const double eps = p.epsilon;
  auto A = [eps](int n) { return dressed_ab(n, eps).first; };
  auto B = [eps](int n) { return dressed_ab(n, eps).second; };
  auto g = [&](int n) {
    double v = A(n) * B(n + 1) / std::sqrt(n + 1.0);
    if (n > 0) v -= A(n + 1) * B(n) / std::sqrt(double(n));
    return v;
  };
  auto f11 = [&](int n) { return A(n) * A(n + 1) + std::sqrt(n / (n + 1.0)) * B(n) * B(n + 1); };
  auto f22 = [&](int n) {
    return A(n + 1) * A(n + 2) + std::sqrt((n + 2.0) / (n + 1.0)) * B(n + 1) * B(n + 2);
  };

  Triplets t;
  for (int m = 0; m < N; ++m) {
    const double sm = std::sqrt(double(m));
    if (m >= 1) {
      t.emplace_back(os(m - 1, 0), os(m, 0), sm * f11(m - 1));
      t.emplace_back(os(m - 1, 1), os(m, 1), sm * f22(m - 1));
    }
    t.emplace_back(os(m, 0), os(m, 1), kI * (g(m) * m + A(m) * B(m + 1) / std::sqrt(m + 1.0)));
    if (m >= 2) {
      t.emplace_back(os(m - 2, 1), os(m, 0), kI * g(m - 1) * std::sqrt(double(m) * (m - 1)));
    }
  }
  const SparseMatrix a = embed_leading(space, from_triplets(2 * Index(N), t));
  Operator ad(space, Matrix(a));
  Operator add = ad.adjoint();
  return {std::move(ad), std::move(add)};
}

double chi(int n, double epsilon) {
  const double below = 1.0 + 2.0 * (n - 1.0) * epsilon;
  if (below < 0.0) {
    std::ostringstream os;
    os << "chi undefined at n = " << n << " for epsilon = " << epsilon;
    throw DomainError(os.str());
  }
  const double s = level_root(n, epsilon);
  // (1 - s_{n-1}/s_n) / eps = 2 / (s_n (s_n + s_{n-1}))
  return 2.0 / (s * (s + std::sqrt(below)));
}

Operator closed_form_transformed_frequency(const DiracParams& p, const SpaceDescriptor& space,
                                        std::optional<EdgeConvention> corner) {
  require_dirac_space(space);
  const int N = space.osc_dim();
  const double r = std::sqrt(2.0 * p.epsilon);
  auto chi_at = [&](int n) -> cplx { return n == 0 ? corner_chi(p.epsilon, corner) : chi(n, p.epsilon); };
  Triplets t;
  for (int m = 0; m < N; ++m) {
    t.emplace_back(os(m, 0), os(m, 0), chi_at(m));
    t.emplace_back(os(m, 1), os(m, 1), -chi(m + 1, p.epsilon));
    if (m + 1 < N) {
      const cplx v = kI * r * std::sqrt(m + 1.0) * chi(m + 1, p.epsilon);
      t.emplace_back(os(m + 1, 0), os(m, 1), v);
      t.emplace_back(os(m, 1), os(m + 1, 0), std::conj(v));
    }
  }
  return {space, Matrix(embed_leading(space, from_triplets(2 * Index(N), t)))};
}

Operator chi_operator(const DiracParams& p, const SpaceDescriptor& space,
                      std::optional<EdgeConvention> corner) {
  require_dirac_space(space);
  const int N = space.osc_dim();
  SparseMatrix diag = local::diagonal(N, [&](int n) -> cplx {
    return n == 0 ? corner_chi(p.epsilon, corner) : chi(n, p.epsilon);
  });
  Operator out = embed(space, Factor::Oscillator, diag);

  const SpaceDescriptor ls = make_space(N, true);
  const FwUnitary u = build_fw_unitary(p, ls);
  const Operator conj = to_dirac(frequency_operator_general(p, ls).op, u);
  const Operator closed = closed_form_transformed_frequency(p, ls, corner);
  const double dev = interior_max_abs((conj - closed).matrix(), interior_indices(ls));
  if (dev > 1e-9) {
    std::ostringstream os;
    os << "closed-form transformed frequency deviates from conjugation by " << dev;
    throw AssemblyError(os.str());
  }
  return out;
}

}  // namespace dqnd
