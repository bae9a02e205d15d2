#include "dqnd/qnd.hpp"

#include <cmath>
#include <sstream>

namespace dqnd {

namespace {

using Triplets = std::vector<Eigen::Triplet<cplx>>;

inline Index os(int n, int s) { return 2 * Index(n) + s; }

constexpr double kXzpt = 0.70710678118654752440;

void check_index(int index) {
  if (index != 1 && index != 2) {
    throw ContractError("quadrature index must be 1 or 2, got " + std::to_string(index));
  }
}

SparseMatrix osc_a(const SpaceDescriptor& space) {
  return embed_sparse(space, Factor::Oscillator, local::annihilation(space.osc_dim()));
}

SparseMatrix spin_op(const SpaceDescriptor& space, PauliAxis axis) {
  return embed_sparse(space, Factor::DiracSpin, local::pauli(axis));
}

SparseMatrix adj(const SparseMatrix& m) { return SparseMatrix(m.adjoint()); }

// X1 = x0 (A + A^dagger), X2 = -i x0 (A - A^dagger)
SparseMatrix pair_from(int index, const SparseMatrix& a_like) {
  SparseMatrix out = index == 1 ? SparseMatrix(kXzpt * (a_like + adj(a_like)))
                                : SparseMatrix(cplx(0.0, -kXzpt) * (a_like - adj(a_like)));
  out.makeCompressed();
  return out;
}

// Block-diagonal operator over oscillator (x) dirac spin, one 2x2 block per level.
template <class F>
SparseMatrix per_level_block(const SpaceDescriptor& space, F block) {
  require_dirac_space(space);
  const int N = space.osc_dim();
  Triplets t;
  t.reserve(4 * N);
  for (int n = 0; n < N; ++n) {
    const Eigen::Matrix2cd b = block(n);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        if (b(r, c) != cplx{}) t.emplace_back(os(n, r), os(n, c), b(r, c));
      }
    }
  }
  SparseMatrix m(2 * Index(N), 2 * Index(N));
  m.setFromTriplets(t.begin(), t.end());
  return embed_leading(space, m);
}

}  // namespace

SparseMatrix quadrature_fw_sparse(int index, double t, const DiracParams& p,
                                  const SpaceDescriptor& space, Part part) {
  check_index(index);
  const SparseMatrix phase = per_level_block(space, [&](int n) {
    Eigen::Matrix2cd b = Eigen::Matrix2cd::Zero();
    for (int s = 0; s < 2; ++s) {
      const double w = fw_frequency(n, s, p.epsilon);
      b(s, s) = std::polar(1.0, w * t) * (part == Part::TimeDerivative ? kI * w : cplx(1.0));
    }
    return b;
  });
  return pair_from(index, SparseMatrix(osc_a(space) * phase));
}

SparseMatrix quadrature_weak_sparse(int index, double t, const SpaceDescriptor& space, Part part) {
  check_index(index);
  require_dirac_space(space);
  const SparseMatrix x = kXzpt * (osc_a(space) + adj(osc_a(space)));
  const SparseMatrix pm = cplx(0.0, -kXzpt) * (osc_a(space) - adj(osc_a(space)));
  const SparseMatrix sz = spin_op(space, PauliAxis::Z);
  const double c = std::cos(t), s = std::sin(t);
  const bool d = part == Part::TimeDerivative;
  SparseMatrix out;
  if (index == 1) {
    out = d ? SparseMatrix(-s * x - c * SparseMatrix(pm * sz)) : SparseMatrix(c * x - s * SparseMatrix(pm * sz));
  } else {
    out = d ? SparseMatrix(c * SparseMatrix(x * sz) - s * pm) : SparseMatrix(s * SparseMatrix(x * sz) + c * pm);
  }
  out.makeCompressed();
  return out;
}

SparseMatrix quadrature_weak_exponential_sparse(int index, double t, const SpaceDescriptor& space) {
  check_index(index);
  const SparseMatrix e = per_level_block(space, [&](int) {
    Eigen::Matrix2cd b = Eigen::Matrix2cd::Zero();
    b(0, 0) = std::polar(1.0, t);
    b(1, 1) = std::polar(1.0, -t);
    return b;
  });
  return pair_from(index, SparseMatrix(osc_a(space) * e));
}

SparseMatrix quadrature_weak_next_order_sparse(int index, double t, double epsilon,
                                               const SpaceDescriptor& space, Part part) {
  check_index(index);
  const bool d = part == Part::TimeDerivative;
  const SparseMatrix e = per_level_block(space, [&](int) {
    Eigen::Matrix2cd b = Eigen::Matrix2cd::Zero();
    b(0, 0) = std::polar(1.0, t) * (d ? kI : cplx(1.0));
    b(1, 1) = std::polar(1.0, -t) * (d ? -kI : cplx(1.0));
    return b;
  });
  const SparseMatrix a = osc_a(space);
  const SparseMatrix ad = adj(a);
  const SparseMatrix sp = spin_op(space, PauliAxis::Plus);
  const SparseMatrix sm = spin_op(space, PauliAxis::Minus);
  const SparseMatrix tt = SparseMatrix(a + cplx(0.0, std::sqrt(epsilon / 2.0)) * sp) * e;
  const SparseMatrix s = SparseMatrix(SparseMatrix(ad * sp) - SparseMatrix(a * sm)) * ad;
  const double k = kXzpt * std::sqrt(2.0 * epsilon) * (d ? std::cos(t) : std::sin(t));
  SparseMatrix out = index == 1 ? SparseMatrix(pair_from(1, tt) + k * SparseMatrix(s + adj(s)))
                                : SparseMatrix(pair_from(2, tt) + cplx(0.0, -k) * SparseMatrix(s - adj(s)));
  out.makeCompressed();
  return out;
}

double strong_frequency_factor(int n, double epsilon) {
  return std::sqrt(2.0 / epsilon) * (std::sqrt(std::max(n - 1.0, 0.0)) - std::sqrt(double(n)));
}

SparseMatrix frequency_strong_sparse(double epsilon, const SpaceDescriptor& space) {
  return per_level_block(space, [&](int n) {
    const double w = strong_frequency_factor(n, epsilon);
    Eigen::Matrix2cd b = Eigen::Matrix2cd::Zero();
    b(0, 1) = -kI * w;
    b(1, 0) = kI * w;
    return b;
  });
}

FrequencyOperator frequency_operator_strong(const DiracParams& p, const SpaceDescriptor& space) {
  return {Operator(space, Matrix(frequency_strong_sparse(p.epsilon, space))),
          FrequencyRegime::Strong};
}

SparseMatrix quadrature_strong_sparse(int index, double t, double epsilon,
                                      const SpaceDescriptor& space, Part part) {
  check_index(index);
  // exp(i w t sy) = cos(wt) + i sin(wt) sy, and i sy = [[0, 1], [-1, 0]]
  const SparseMatrix e = per_level_block(space, [&](int n) {
    const double w = strong_frequency_factor(n, epsilon);
    const double c = std::cos(w * t), s = std::sin(w * t);
    Eigen::Matrix2cd b;
    b << c, s, -s, c;
    if (part == Part::TimeDerivative) {
      Eigen::Matrix2cd isy;
      isy << 0.0, 1.0, -1.0, 0.0;
      b = (w * isy) * b;
    }
    return b;
  });
  return pair_from(index, SparseMatrix(osc_a(space) * e));
}

Operator quadrature_fw(const QuadratureSpec& spec, const SpaceDescriptor& space) {
  return {space, Matrix(quadrature_fw_sparse(spec.index, spec.time, spec.params, space))};
}

Operator quadrature_weak(const QuadratureSpec& spec, const SpaceDescriptor& space) {
  return {space, Matrix(quadrature_weak_sparse(spec.index, spec.time, space))};
}

Operator quadrature_weak_next_order(const QuadratureSpec& spec, const SpaceDescriptor& space) {
  return {space, Matrix(quadrature_weak_next_order_sparse(spec.index, spec.time,
                                                          spec.params.epsilon, space))};
}

Operator quadrature_strong(const QuadratureSpec& spec, const SpaceDescriptor& space) {
  return {space,
          Matrix(quadrature_strong_sparse(spec.index, spec.time, spec.params.epsilon, space))};
}

Operator quadrature_dirac(const QuadratureSpec& spec, const FwUnitary& u,
                          const SpaceDescriptor& space) {
  return to_dirac(quadrature_fw(spec, space), u);
}

Operator quadrature(const QuadratureSpec& spec, const SpaceDescriptor& space, const FwUnitary* u,
                    Part part) {
  const int i = spec.index;
  const double t = spec.time;
  switch (spec.regime) {
    case Regime::Weak:
      return {space, Matrix(quadrature_weak_sparse(i, t, space, part))};
    case Regime::WeakNextOrder:
      return {space, Matrix(quadrature_weak_next_order_sparse(i, t, spec.params.epsilon, space, part))};
    case Regime::Strong:
      return {space, Matrix(quadrature_strong_sparse(i, t, spec.params.epsilon, space, part))};
    case Regime::FwGeneral:
      return {space, Matrix(quadrature_fw_sparse(i, t, spec.params, space, part))};
    case Regime::DiracGeneral:
      if (!u) throw ContractError("the Dirac-frame quadrature needs the FW unitary");
      return to_dirac(Operator(space, Matrix(quadrature_fw_sparse(i, t, spec.params, space, part))), *u);
  }
  throw ContractError("unknown regime");
}

SparseMatrix h_nr_sparse(const DiracParams& p, const SpaceDescriptor& space) {
  return per_level_block(space, [&](int n) {
    Eigen::Matrix2cd b = Eigen::Matrix2cd::Zero();
    b(0, 0) = p.mc2 + (n + 0.5) - 0.5;
    b(1, 1) = -p.mc2 - (n + 0.5) - 0.5;
    return b;
  });
}

SparseMatrix h_r_sparse(const DiracParams& p, const SpaceDescriptor& space) {
  return per_level_block(space, [&](int n) {
    const double w = std::sqrt(2.0 * n / p.epsilon);
    Eigen::Matrix2cd b = Eigen::Matrix2cd::Zero();
    // -sy w
    b(0, 1) = kI * w;
    b(1, 0) = -kI * w;
    return b;
  });
}

StateVector min_uncertainty_state(cplx alpha, cplx c1, cplx c2, Representation rep,
                                  const FwUnitary* u, const SpaceDescriptor& space) {
  const double norm2 = std::norm(c1) + std::norm(c2);
  if (std::abs(norm2 - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "spin amplitudes are not normalized: |c1|^2 + |c2|^2 = " << norm2;
    throw ContractError(os.str());
  }
  require_dirac_space(space);
  if (space.has(Factor::ProbeBoson) || space.has(Factor::ProbeSpin)) {
    throw ConfigError("minimum-uncertainty states live on oscillator (x) dirac spin only");
  }
  const StateVector osc = coherent_state(make_space(space.osc_dim(), false), Boson::Oscillator, alpha);
  Vector spin(2);
  spin << c1, c2;
  StateVector fw = product_state(space, osc.amplitudes(), spin);
  if (rep == Representation::Fw) return fw;
  if (!u) throw ContractError("the Dirac-frame state needs the FW unitary");
  if (!(u->u.space() == space)) throw DimensionError("FW unitary space mismatch");
  return StateVector::normalized(space, u->u.matrix().adjoint() * fw.amplitudes());
}

}  // namespace dqnd
