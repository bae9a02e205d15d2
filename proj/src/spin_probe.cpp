#include "dqnd/spin_probe.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dqnd/banded.hpp"
#include "dqnd/propagator.hpp"

namespace dqnd {

namespace {

constexpr int kMargin = 4;
constexpr double kChunk = 0.25;

struct Dims {
  int osc;
  int probe;
};

Dims initial_dims(const SpinProbeRun& run, const DiracParams& p) {
  const double a = std::abs(run.alpha);
  const int osc = int(std::ceil(std::pow(a + 6.0 + 2.0 * run.g * run.t_final, 2))) + 2 * kMargin;
  const double force = run.g * 2.0 * p.x_zpt * (a + 3.0);
  const double swing = run.omega_b > 0.0
                           ? std::abs(1.0 - std::polar(1.0, -run.omega_b * run.t_final)) / run.omega_b
                           : run.t_final;
  const double reach = std::abs(run.beta) + force * swing;
  const int probe = std::max(8, int(std::ceil((reach + 5.0) * (reach + 5.0))) + 2 * kMargin);
  return {osc, probe};
}

void evolve(const BandedMatrix& h, double t, Vector& psi) {
  ChebyshevStepper stepper(psi.size());
  const int chunks = std::max(1, int(std::ceil(t / kChunk - 1e-12)));
  for (int c = 0; c < chunks; ++c) stepper.step(h, t / chunks, psi);
}

// Weight in the last kMargin levels of the oscillator and of the probe boson.
double tails(const SpaceDescriptor& space, const Vector& psi) {
  double osc = 0.0, probe = 0.0;
  for (Index i = 0; i < psi.size(); ++i) {
    const auto c = space.coords(i);
    const double w = std::norm(psi(i));
    if (c.n >= space.osc_dim() - kMargin) osc += w;
    if (c.b >= space.probe_boson_dim() - kMargin) probe += w;
  }
  return std::max(osc, probe);
}

Vector initial_state(const SpinProbeRun& run, const SpaceDescriptor& space) {
  Vector ds(2);
  ds << run.c1, run.c2;
  Vector ps;
  if (space.probe_spin()) {
    ps = Vector::Zero(2);
    ps(0) = 1.0;
  }
  return product_state(space, coherent_amplitudes(space.osc_dim(), run.alpha), ds,
                       coherent_amplitudes(space.probe_boson_dim(), run.beta), ps)
      .amplitudes();
}

struct Attempt {
  Vector full;
  Vector effective;
  double leakage;
};

Attempt simulate(const SpinProbeRun& run, const DiracParams& p, const MeasurementSetup& setup,
                 Dims dims) {
  const SpaceDescriptor full_space = make_space(dims.osc, true, dims.probe, true);
  const SpaceDescriptor eff_space = make_space(dims.osc, true, dims.probe, false);
  Attempt out;

  out.full = initial_state(run, full_space);
  evolve(BandedMatrix::from_sparse(build_htot_spin_probe_sparse(setup, p, full_space, run.system)),
         run.t_final, out.full);

  const SparseMatrix b = local::annihilation(dims.probe);
  const SparseMatrix bq = embed_sparse(eff_space, Factor::ProbeBoson, SparseMatrix(b + SparseMatrix(b.adjoint())));
  const SparseMatrix nb = embed_sparse(
      eff_space, Factor::ProbeBoson, local::diagonal(dims.probe, [](int k) { return cplx(k); }));
  const SparseMatrix a = embed_sparse(eff_space, Factor::Oscillator, local::annihilation(dims.osc));
  const SparseMatrix x = p.x_zpt * (a + SparseMatrix(a.adjoint()));
  const SparseMatrix frame = run.omega_b * nb + run.g * SparseMatrix(x * bq);
  out.effective = initial_state(run, eff_space);
  evolve(BandedMatrix::from_sparse(frame), run.t_final, out.effective);
  evolve(BandedMatrix::from_sparse(h_r_sparse(p, eff_space)), run.t_final, out.effective);

  out.leakage = std::max(tails(full_space, out.full), tails(eff_space, out.effective));
  return out;
}

}  // namespace

double mean_abs_omega_r(std::complex<double> alpha, double epsilon, int osc_dim) {
  const Vector c = coherent_amplitudes(osc_dim, alpha);
  double m = 0.0;
  for (int n = 0; n < osc_dim; ++n) m += std::norm(c(n)) * std::abs(strong_frequency_factor(n, epsilon));
  return m;
}

EffectiveVmReport effective_vm_check(const SpinProbeRun& run) {
  if (!(run.t_final > 0.0)) throw ConfigError("final time must be positive");
  if (!(run.g >= 0.0) || !std::isfinite(run.g)) throw ConfigError("g must be finite and >= 0");
  if (std::abs(std::norm(run.c1) + std::norm(run.c2) - 1.0) > 1e-12) {
    throw ContractError("spin amplitudes are not normalized");
  }
  const DiracParams p = DiracParams::from_epsilon(run.epsilon);
  Dims dims = initial_dims(run, p);
  if (run.osc_dim > 0) dims.osc = run.osc_dim;
  if (run.probe_dim > 0) dims.probe = run.probe_dim;
  const bool fixed = run.osc_dim > 0 && run.probe_dim > 0;

  EffectiveVmReport rep{};
  rep.excitation = std::norm(run.alpha);
  rep.omega_r_mean = mean_abs_omega_r(run.alpha, run.epsilon, dims.osc);
  rep.omega_s = run.omega_s >= 0.0 ? run.omega_s : 1e-3 * rep.omega_r_mean;
  rep.omega_ratio = rep.omega_s > 0.0 ? rep.omega_r_mean / rep.omega_s : HUGE_VAL;
  rep.strength = run.g / std::sqrt(std::max(rep.excitation, 1e-300));
  if (rep.omega_ratio <= 10.0) rep.warnings.push_back("<|omega_r|> does not dominate omega_s");
  if (rep.strength >= 0.1) rep.warnings.push_back("coupling is not weak against sqrt(<n>)");
  rep.regime_ok = rep.warnings.empty();

  MeasurementSetup setup;
  setup.scheme = Scheme::SpinProbe;
  setup.g = run.g;
  setup.omega_b = run.omega_b;
  setup.omega_s = rep.omega_s;

  for (int attempt = 0;; ++attempt) {
    const Attempt a = simulate(run, p, setup, dims);
    if (a.leakage <= run.leakage_limit || fixed || attempt == 4) {
      if (a.leakage > run.leakage_limit) {
        std::ostringstream os;
        os << "spin-probe leakage " << a.leakage << " at osc_dim " << dims.osc << ", probe_dim "
           << dims.probe;
        throw TruncationError(os.str(), int(dims.osc * 1.4));
      }
      double f = 0.0;
      for (int ps = 0; ps < 2; ++ps) {
        cplx o{};
        for (Index i = 0; i < a.effective.size(); ++i) o += std::conj(a.effective(i)) * a.full(2 * i + ps);
        f += std::norm(o);
      }
      rep.fidelity = f;
      rep.osc_dim = dims.osc;
      rep.probe_dim = dims.probe;
      rep.leakage = a.leakage;
      return rep;
    }
    if (run.osc_dim == 0) dims.osc = int(std::ceil(dims.osc * 1.4));
    if (run.probe_dim == 0) dims.probe = int(std::ceil(dims.probe * 1.4));
  }
}

std::vector<double> spin_rotation_trace(int n, int sy_sign, double epsilon,
                                        const std::vector<double>& times) {
  if (n < 0) throw DomainError("level must be >= 0");
  const SpaceDescriptor space = make_space(n + 2, true, 0, true);
  const SparseMatrix sx = embed_sparse(space, Factor::ProbeSpin, local::pauli(PauliAxis::X));
  const SparseMatrix sz = embed_sparse(space, Factor::ProbeSpin, local::pauli(PauliAxis::Z));
  const Operator h(space, Matrix(0.5 * SparseMatrix(frequency_strong_sparse(epsilon, space) * sx)));
  Vector osc = Vector::Zero(n + 2);
  osc(n) = 1.0;
  Vector ds(2);
  ds << 1.0, cplx(0.0, sy_sign >= 0 ? 1.0 : -1.0);
  Vector ps = Vector::Zero(2);
  ps(0) = 1.0;
  const StateVector psi0 = product_state(space, osc, ds / std::sqrt(2.0), {}, ps);
  const Operator szo(space, Matrix(sz));
  std::vector<double> out;
  for (double t : times) {
    const Operator u = apply_function(h, [t](double e) { return std::polar(1.0, -e * t); });
    const StateVector psi(space, u.matrix() * psi0.amplitudes());
    out.push_back(expectation(psi, szo).real());
  }
  return out;
}

}  // namespace dqnd
