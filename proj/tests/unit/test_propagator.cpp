#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "dqnd/propagator.hpp"

using namespace dqnd;

namespace {

std::vector<double> grid(double t_max, int n) {
  std::vector<double> t;
  for (int i = 0; i < n; ++i) t.push_back(t_max * i / (n - 1));
  return t;
}

Matrix exact_propagator(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Eigen::VectorXcd ph = (-kI * t * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

TEST_CASE("coherent state in a harmonic oscillator") {
  const auto space = make_space(40, false);
  const Operator h = number(space, Boson::Oscillator);
  const cplx alpha(1.2, 0.0);
  const auto t = grid(6.0, 31);
  PropagationOptions opt;
  opt.time_independent = true;
  const TimeSeries ts =
      propagate([&](double) { return h; }, coherent_state(space, Boson::Oscillator, alpha), t,
                {{"x", [&](double) { return position(space); }}}, opt);
  const auto& x = ts.get("x");
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(x.mean[i] == doctest::Approx(std::sqrt(2.0) * alpha.real() * std::cos(t[i])).epsilon(1e-9));
    CHECK(x.variance[i] == doctest::Approx(0.5).epsilon(1e-9));
  }
  CHECK(ts.max_norm_drift < 1e-9);
  CHECK(ts.max_leakage() < 1e-12);
}

TEST_CASE("driven oscillator against the exact displacement") {
  // H = n + f cos(t) x has <x>'' + <x> = -sqrt2... checked through a dense reference instead
  const auto space = make_space(30, false);
  const Operator n = number(space, Boson::Oscillator), x = position(space);
  const double f = 0.3;
  const OperatorBuilder h = [&](double t) { return n + cplx(f * std::cos(0.7 * t)) * x; };
  const auto t = grid(3.0, 7);
  const StateVector psi0 = coherent_state(space, Boson::Oscillator, 0.5);
  const Vector fine = propagate_state(h, psi0.amplitudes(), t, 1e-4, false);
  PropagationOptions opt;
  opt.max_step = 0.01;
  const TimeSeries ts = propagate(h, psi0, t, {{"x", [&](double) { return x; }}}, opt);
  const cplx mean = fine.dot(x.matrix() * fine);
  CHECK(ts.get("x").mean.back() == doctest::Approx(mean.real()).epsilon(1e-7));
}

TEST_CASE("Chebyshev step matches the dense exponential") {
  std::mt19937 rng(5);
  std::normal_distribution<double> nd;
  const int dim = 60;
  SparseMatrix m(dim, dim);
  std::vector<Eigen::Triplet<cplx>> trip;
  for (int i = 0; i < dim; ++i) {
    trip.emplace_back(i, i, cplx(nd(rng) * 5.0));
    for (int d : {1, 3}) {
      if (i + d < dim) {
        const cplx v(nd(rng), nd(rng));
        trip.emplace_back(i, i + d, v);
        trip.emplace_back(i + d, i, std::conj(v));
      }
    }
  }
  m.setFromTriplets(trip.begin(), trip.end());
  const BandedMatrix b = BandedMatrix::from_sparse(m);
  Vector psi = Vector::Random(dim);
  psi.normalize();
  const Vector expected = exact_propagator(Matrix(m), 0.37) * psi;
  ChebyshevStepper stepper(dim);
  Vector out = psi;
  CHECK(stepper.step(b, 0.37, out) > 0);
  CHECK((out - expected).norm() < 1e-12);
  CHECK(std::abs(out.norm() - 1.0) < 1e-13);

  const auto [lo, hi] = b.spectral_bounds();
  Vector again = psi;
  stepper.step(b, lo, hi, 0.37, again);
  CHECK((again - expected).norm() < 1e-12);
}

TEST_CASE("leakage") {
  const auto space = make_space(10, false);
  Vector psi = Vector::Zero(10);
  psi(9) = 1.0;
  CHECK(oscillator_leakage(space, psi) == doctest::Approx(1.0));
  psi.setZero();
  psi(2) = 1.0;
  CHECK(oscillator_leakage(space, psi) == 0.0);
}

TEST_CASE("truncation is reported") {
  const auto space = make_space(12, false);
  const Operator n = number(space, Boson::Oscillator), x = position(space);
  const OperatorBuilder h = [&](double) { return n + cplx(3.0) * x; };
  PropagationOptions opt;
  opt.time_independent = true;
  CHECK_THROWS_AS(propagate(h, coherent_state(space, Boson::Oscillator, 0.5), grid(3.0, 4), {}, opt),
                  TruncationError);
}
