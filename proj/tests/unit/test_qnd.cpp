#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "dqnd/qnd.hpp"

using namespace dqnd;

namespace {

Operator op(const SpaceDescriptor& s, const SparseMatrix& m) { return Operator(s, Matrix(m)); }

double dev(const Operator& a, const Operator& b, const std::vector<Index>& idx) {
  return interior_max_abs((a - b).matrix(), idx);
}

double commutator_defect(const Operator& x1, const Operator& x2, const std::vector<Index>& idx) {
  return interior_deviation_from_scalar(commutator(x1, x2).matrix(), kI, idx);
}

// i [H, X] + dX/dt
Operator qnd_defect(const Operator& h, const Operator& x, const Operator& dxdt) {
  return kI * commutator(h, x) + dxdt;
}

}  // namespace

TEST_CASE("FW quadratures") {
  const DiracParams p = DiracParams::from_epsilon(0.1);
  const auto space = make_space(40, true);
  const auto idx = interior_indices(space);
  const Operator x10 = quadrature_fw({1, Regime::FwGeneral, 0.0, p}, space);
  CHECK((x10.matrix() - position(space).matrix()).cwiseAbs().maxCoeff() < 1e-15);
  const Operator x1 = quadrature_fw({1, Regime::FwGeneral, 1.7, p}, space);
  const Operator x2 = quadrature_fw({2, Regime::FwGeneral, 1.7, p}, space);
  CHECK(x1.is_hermitian(1e-12));
  CHECK(x2.is_hermitian(1e-12));
  CHECK(commutator_defect(x1, x2, idx) < 1e-9);

  const Operator hf = fw_hamiltonian(p, space);
  const Operator d1 = op(space, quadrature_fw_sparse(1, 1.7, p, space, Part::TimeDerivative));
  CHECK(interior_max_abs(qnd_defect(hf, x1, d1), idx) < 1e-8);
  const double h = 1e-6;
  const Operator fd = cplx(0.5 / h) * (quadrature_fw({1, Regime::FwGeneral, 1.7 + h, p}, space) -
                                       quadrature_fw({1, Regime::FwGeneral, 1.7 - h, p}, space));
  CHECK(dev(fd, d1, idx) < 1e-6);
}

TEST_CASE("weak quadratures") {
  const auto space = make_space(30, true);
  const DiracParams p = DiracParams::from_epsilon(0.01);
  const auto idx = interior_indices(space);
  const Operator x = position(space), pm = momentum(space);
  const Operator sz = pauli(space, PauliAxis::Z, Spin::Dirac);
  CHECK(dev(quadrature_weak({1, Regime::Weak, 0.0, p}, space), x, idx) < 1e-15);
  CHECK(dev(quadrature_weak({1, Regime::Weak, std::numbers::pi / 2, p}, space), cplx(-1.0) * (pm * sz), idx) < 1e-15);
  for (double t : {0.3, 1.1, 4.0}) {
    const Operator x1 = quadrature_weak({1, Regime::Weak, t, p}, space);
    const Operator x2 = quadrature_weak({2, Regime::Weak, t, p}, space);
    CHECK(commutator_defect(x1, x2, idx) < 1e-12);
    CHECK(dev(x1, op(space, quadrature_weak_exponential_sparse(1, t, space)), idx) < 1e-12);
    CHECK(dev(x2, op(space, quadrature_weak_exponential_sparse(2, t, space)), idx) < 1e-12);
    const Operator hnr = op(space, h_nr_sparse(p, space));
    const Operator d1 = op(space, quadrature_weak_sparse(1, t, space, Part::TimeDerivative));
    CHECK(interior_max_abs(qnd_defect(hnr, x1, d1), idx) < 1e-8);
  }
}

TEST_CASE("next-order weak quadratures") {
  const auto space = make_space(30, true);
  const auto idx = interior_indices(space);
  const double t = 0.8;
  const Operator weak = op(space, quadrature_weak_sparse(1, t, space));
  CHECK(dev(op(space, quadrature_weak_next_order_sparse(1, t, 0.0, space)), weak, idx) < 1e-14);
  std::vector<double> rel;
  for (double e : {1e-4, 5e-5}) {
    const Operator nx = op(space, quadrature_weak_next_order_sparse(1, t, e, space));
    CHECK(nx.is_hermitian(1e-12));
    rel.push_back((nx - weak).matrix().norm() / weak.matrix().norm());
  }
  CHECK(rel[0] > 1e-3);
  CHECK(rel[0] < 1e-1);
  CHECK(rel[0] / rel[1] == doctest::Approx(std::sqrt(2.0)).epsilon(0.1));
}

TEST_CASE("strong frequency operator") {
  const auto space = make_space(10, true);
  CHECK(strong_frequency_factor(0, 100.0) == 0.0);
  CHECK(std::abs(strong_frequency_factor(100, 100.0)) == doctest::Approx(7.09e-3).epsilon(2e-3));
  const SparseMatrix w = frequency_strong_sparse(100.0, space);
  for (int s = 0; s < 2; ++s) {
    for (int r = 0; r < 2; ++r) CHECK(std::abs(Matrix(w)(space.index(0, s), space.index(0, r))) == 0.0);
  }
  for (int n = 50; n <= 200; ++n) {
    const double general = fw_frequency(n, 0, 1e3);
    CHECK(std::abs(std::abs(strong_frequency_factor(n, 1e3)) / general - 1.0) < 0.02);
  }
}

TEST_CASE("strong quadratures") {
  const double e = 100.0;
  const DiracParams p = DiracParams::from_epsilon(e);
  const auto space = make_space(40, true);
  const auto idx = interior_indices(space);
  CHECK(dev(quadrature_strong({1, Regime::Strong, 0.0, p}, space), position(space), idx) < 1e-12);
  const Operator x1 = quadrature_strong({1, Regime::Strong, 3.0, p}, space);
  const Operator x2 = quadrature_strong({2, Regime::Strong, 3.0, p}, space);
  CHECK(commutator_defect(x1, x2, idx) < 1e-9);
  const Operator hr = op(space, h_r_sparse(p, space));
  const Operator d1 = op(space, quadrature_strong_sparse(1, 3.0, e, space, Part::TimeDerivative));
  CHECK(interior_max_abs(qnd_defect(hr, x1, d1), idx) < 1e-8);
}

TEST_CASE("Dirac-frame quadratures") {
  const auto space = make_space(40, true);
  const auto idx = interior_indices(space);
  const double t = 1.3;
  std::vector<double> gaps;
  for (double e : {1e-6, 4e-6, 1.6e-5}) {
    const DiracParams p = DiracParams::from_epsilon(e);
    const FwUnitary u = build_fw_unitary(p, space);
    const Operator xd = quadrature_dirac({1, Regime::DiracGeneral, t, p}, u, space);
    gaps.push_back(dev(xd, quadrature_weak({1, Regime::Weak, t, p}, space), idx));
  }
  CHECK(gaps[0] < 50.0 * std::sqrt(1e-6));
  CHECK(gaps[1] / gaps[0] == doctest::Approx(2.0).epsilon(0.15));
  CHECK(gaps[2] / gaps[1] == doctest::Approx(2.0).epsilon(0.15));

  const DiracParams p = DiracParams::from_epsilon(0.1);
  const FwUnitary u = build_fw_unitary(p, space);
  const QuadratureSpec s1{1, Regime::DiracGeneral, t, p};
  const Operator x1 = quadrature(s1, space, &u);
  const Operator x2 = quadrature({2, Regime::DiracGeneral, t, p}, space, &u);
  double flip = 0.0;
  for (Index i : idx) {
    for (Index j : idx) {
      if (space.coords(i).s != space.coords(j).s) flip = std::max(flip, std::abs(x1.matrix()(i, j)));
    }
  }
  CHECK(flip > 1e-3);
  CHECK(commutator_defect(x1, x2, interior_indices(space, 2, 0.8)) < 1e-9);
  const Operator d1 = quadrature(s1, space, &u, Part::TimeDerivative);
  CHECK(interior_max_abs(qnd_defect(build_h_dirac(p, space), x1, d1), interior_indices(space, 2, 0.8)) < 1e-8);
  CHECK_THROWS_AS(quadrature(s1, space, nullptr), ContractError);
  CHECK_THROWS_AS(quadrature({3, Regime::Weak, t, p}, space), ContractError);
}

TEST_CASE("minimum-uncertainty states") {
  const auto space = make_space(40, true);
  const double r = std::sqrt(0.5);
  const DiracParams p = DiracParams::from_epsilon(0.1);
  const StateVector f = min_uncertainty_state(0.5, r, r, Representation::Fw, nullptr, space);
  CHECK(variance(f, quadrature_fw({1, Regime::FwGeneral, 0.0, p}, space)) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(variance(f, quadrature_fw({2, Regime::FwGeneral, 0.0, p}, space)) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK_THROWS_AS(min_uncertainty_state(0.5, 1.0, 1.0, Representation::Fw, nullptr, space), ContractError);

  SUBCASE("weak limit") {
    const DiracParams w = DiracParams::from_epsilon(1e-6);
    const FwUnitary u = build_fw_unitary(w, space);
    const cplx c1(0.6), c2(0.0, 0.8);
    const StateVector d = min_uncertainty_state(0.5, c1, c2, Representation::Dirac, &u, space);
    const StateVector target =
        product_state(space, coherent_amplitudes(40, 0.5), Vector{{c1, kI * c2}});
    CHECK(fidelity(d, target) > 1.0 - 1e-4);
  }

  SUBCASE("extreme limit on high Fock levels") {
    const auto big = make_space(120, true);
    const DiracParams x = DiracParams::from_epsilon(1e3);
    const FwUnitary u = build_fw_unitary(x, big);
    const cplx c1(0.8), c2(0.6);
    const cplx alpha = 5.0;
    const StateVector d = min_uncertainty_state(alpha, c1, c2, Representation::Dirac, &u, big);
    const Vector spin{{(c1 + c2) * r, -kI * (c1 - c2) * r}};
    const StateVector target = product_state(big, coherent_amplitudes(120, alpha), spin);
    Vector a = d.amplitudes(), b = target.amplitudes();
    for (Index i = 0; i < a.size(); ++i) {
      if (big.coords(i).n < 10) a(i) = b(i) = 0.0;
    }
    CHECK(std::norm(a.dot(b)) / (a.squaredNorm() * b.squaredNorm()) > 1.0 - 1e-2);
  }
}
