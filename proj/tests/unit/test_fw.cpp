#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dqnd/fw.hpp"

using namespace dqnd;

namespace {

double interior_dev(const Operator& a, const Operator& b, const std::vector<Index>& idx) {
  return interior_max_abs((a - b).matrix(), idx);
}

}  // namespace

TEST_CASE("unitarity and diagonalization across epsilon") {
  for (double e : {1e-6, 1e-3, 0.02, 0.1, 1.0, 10.0, 1e3}) {
    CAPTURE(e);
    const DiracParams p = DiracParams::from_epsilon(e);
    const auto space = make_space(40, true);
    const FwUnitary u = build_fw_unitary(p, space);
    const auto idx = interior_indices(space);
    const Operator id = Operator::identity(space);
    CHECK(interior_dev(u.u * u.u.adjoint(), id, idx) < 1e-10);
    CHECK(interior_dev(u.u.adjoint() * u.u, id, idx) < 1e-10);
    const Operator hf = to_fw(build_h_dirac(p, space), u);
    CHECK(interior_dev(hf, fw_hamiltonian(p, space), idx) < 1e-9 * std::max(1.0, p.mc2));
  }
}

TEST_CASE("dressed states map to Fock states") {
  const DiracParams p = DiracParams::from_epsilon(0.1);
  const auto space = make_space(30, true);
  const FwUnitary u = build_fw_unitary(p, space);
  for (int n = 0; n < 20; ++n) {
    const Vector up = u.u.matrix() * dressed_state(n, Branch::Plus, p, space).amplitudes();
    const Vector dn = u.u.matrix() * dressed_state(n, Branch::Minus, p, space).amplitudes();
    CHECK(std::abs(up(space.index(n, 0)) - cplx(1.0)) < 1e-9);
    CHECK(std::abs(dn(space.index(n, 1)) - cplx(1.0)) < 1e-9);
  }
}

TEST_CASE("weak limit of the unitary") {
  const DiracParams p = DiracParams::from_epsilon(1e-8);
  const auto space = make_space(30, true);
  const FwUnitary u = build_fw_unitary(p, space);
  const Operator sz = pauli(space, PauliAxis::Z, Spin::Dirac);
  const Operator id = Operator::identity(space);
  const Operator target = cplx(0.5) * (id + sz) + cplx(0.0, -0.5) * (id - sz);
  CHECK(interior_dev(u.u, target, interior_indices(space)) < 1e-3);
}

TEST_CASE("FW Hamiltonian diagonal") {
  const DiracParams p = DiracParams::from_epsilon(0.1);
  const auto space = make_space(20, true);
  const Operator hf = fw_hamiltonian(p, space);
  for (int n = 0; n < 20; ++n) {
    CHECK(hf.matrix()(space.index(n, 0), space.index(n, 0)).real() ==
          doctest::Approx(p.mc2 * std::sqrt(1.0 + 2.0 * n * p.epsilon)));
    CHECK(hf.matrix()(space.index(n, 1), space.index(n, 1)).real() ==
          doctest::Approx(-p.mc2 * std::sqrt(1.0 + 2.0 * (n + 1) * p.epsilon)));
  }
  const DiracParams q = DiracParams::from_epsilon(0.02);
  const FwUnitary uq = build_fw_unitary(q, space);
  CHECK(interior_dev(to_fw(build_h_dirac(q, space), uq), fw_hamiltonian(q, space), interior_indices(space)) < 1e-9);
}

TEST_CASE("frequency operator") {
  CHECK(fw_frequency(1, 0, 0.1) == doctest::Approx((std::sqrt(1.2) - 1.0) / 0.1).epsilon(1e-14));
  CHECK(fw_frequency(1, 0, 0.1) == doctest::Approx(0.9545).epsilon(1e-4));
  for (int n = 1; n < 50; ++n) {
    CHECK(std::abs(fw_frequency(n, 0, 1e-6) - 1.0) < 1e-3);
    CHECK(std::abs(fw_frequency(n, 1, 1e-6) + 1.0) < 1e-3);
  }
  CHECK(std::abs(fw_frequency(400, 0, 100.0)) < 0.05);
  CHECK(fw_frequency(0, 0, 0.1) == 0.0);
  const DiracParams p = DiracParams::from_epsilon(0.1);
  const auto space = make_space(20, true);
  const FrequencyOperator w = frequency_operator_general(p, space);
  CHECK(w.op.is_hermitian(1e-14));
  for (int n = 1; n < 20; ++n) {
    const double diff = analytic_energy(n, Branch::Plus, p) - analytic_energy(n - 1, Branch::Plus, p);
    CHECK(w.op.matrix()(space.index(n, 0), space.index(n, 0)).real() == doctest::Approx(diff).epsilon(1e-12));
  }
  const double diff0 = analytic_energy(0, Branch::Minus, p) + p.mc2;
  CHECK(w.op.matrix()(space.index(0, 1), space.index(0, 1)).real() == doctest::Approx(diff0).epsilon(1e-12));
}

TEST_CASE("representation round trip") {
  const DiracParams p = DiracParams::from_epsilon(0.1);
  const auto space = make_space(24, true);
  const FwUnitary u = build_fw_unitary(p, space);
  std::mt19937 rng(7);
  std::normal_distribution<double> nd;
  Matrix m(space.dim(), space.dim());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = cplx(nd(rng), nd(rng));
  }
  const Operator o(space, Matrix(m + m.adjoint()));
  // The interior of the round trip only sees interior rows of U.
  const auto idx = interior_indices(space, 0, 0.8, false);
  CHECK(interior_dev(to_fw(to_dirac(o, u), u), o, idx) < 1e-10);
  CHECK_THROWS_AS(to_fw(Operator::identity(make_space(10, true)), u), DimensionError);
}

TEST_CASE("number is not conserved in the Dirac frame") {
  const DiracParams p = DiracParams::from_epsilon(0.1);
  const auto space = make_space(24, true);
  const FwUnitary u = build_fw_unitary(p, space);
  const Operator nd = to_dirac(number(space, Boson::Oscillator), u);
  CHECK(interior_dev(nd, number(space, Boson::Oscillator), interior_indices(space)) > 0.01);
  const Operator c = commutator(build_h_dirac(p, space), number(space, Boson::Oscillator));
  CHECK(interior_max_abs(c, interior_indices(space)) > 0.01);
}

TEST_CASE("closed-form transformed ladder") {
  const DiracParams p = DiracParams::from_epsilon(0.05);
  const auto space = make_space(40, true);
  const FwUnitary u = build_fw_unitary(p, space);
  const auto [ad, add] = closed_form_transformed_ladder(p, space);
  const auto [a, acr] = ladder(space, Boson::Oscillator);
  const auto idx = interior_indices(space);
  CHECK(interior_dev(ad, to_dirac(a, u), idx) < 1e-9);
  CHECK((add.matrix() - ad.matrix().adjoint()).cwiseAbs().maxCoeff() == 0.0);

  const Operator sz = pauli(space, PauliAxis::Z, Spin::Dirac);
  const Operator sp = pauli(space, PauliAxis::Plus, Spin::Dirac);
  std::vector<double> dev;
  for (double e : {1e-6, 4e-6}) {
    const auto [aw, awd] = closed_form_transformed_ladder(DiracParams::from_epsilon(e), space);
    const Operator approx = a - cplx(e / 4) * (sz * a) + cplx(0.0, std::sqrt(e / 2)) * sp;
    dev.push_back(interior_dev(aw, approx, idx));
  }
  // first neglected term is of order eps^{3/2}
  CHECK(dev[0] < 1e-6 * 0.1);
  CHECK(dev[1] / dev[0] == doctest::Approx(8.0).epsilon(0.15));
}

TEST_CASE("chi") {
  CHECK(chi(0, 0.1) == doctest::Approx((1.0 - std::sqrt(0.8)) / 0.1).epsilon(1e-14));
  CHECK(chi(0, 0.1) == doctest::Approx(1.0557).epsilon(1e-4));
  for (int n = 0; n <= 5; ++n) {
    const double e = 1e-5;
    CHECK(std::abs(chi(n, e) - (1.0 + (0.5 - 2.0 * n) * e)) < 20.0 * e * e * (1 + n * n));
  }
  const double strong = (1.0 - std::sqrt(1.0 - 1.0 / 50.0)) / 100.0;
  CHECK(std::abs(chi(50, 100.0) / strong - 1.0) < 0.01);
  CHECK_THROWS_AS(chi(0, 0.7), DomainError);
}

TEST_CASE("chi operator and transformed frequency") {
  const auto space = make_space(30, true);
  const DiracParams p = DiracParams::from_epsilon(0.1);
  const Operator c = chi_operator(p, space);
  CHECK(c.matrix()(space.index(3, 0), space.index(3, 0)).real() == doctest::Approx(chi(3, 0.1)));
  const FwUnitary u = build_fw_unitary(p, space);
  const Operator closed = closed_form_transformed_frequency(p, space);
  const Operator conj = to_dirac(frequency_operator_general(p, space).op, u);
  CHECK(interior_dev(closed, conj, interior_indices(space)) < 1e-9);
  const DiracParams big = DiracParams::from_epsilon(0.7);
  CHECK_THROWS_AS(chi_operator(big, space), DomainError);
  CHECK_NOTHROW(chi_operator(big, space, EdgeConvention{0.0}));
}
