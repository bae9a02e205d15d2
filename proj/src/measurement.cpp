#include "dqnd/measurement.hpp"

#include <cmath>
#include <numbers>

namespace dqnd {

namespace {

void require_probe_boson(const SpaceDescriptor& space) {
  if (!space.has(Factor::ProbeBoson)) throw ConfigError("space has no probe boson");
}

void require_spin_probe(const MeasurementSetup& setup, const SpaceDescriptor& space) {
  if (setup.scheme != Scheme::SpinProbe) throw ConfigError("setup is not a spin-probe scheme");
  require_probe_boson(space);
  if (!space.has(Factor::ProbeSpin)) throw ConfigError("space has no probe spin");
}

SparseMatrix probe_number(const SpaceDescriptor& space) {
  return embed_sparse(space, Factor::ProbeBoson,
                      local::diagonal(space.probe_boson_dim(), [](int k) { return cplx(k); }));
}

SparseMatrix probe_quadrature(const SpaceDescriptor& space) {
  const SparseMatrix b = local::annihilation(space.probe_boson_dim());
  const SparseMatrix bb = b + SparseMatrix(b.adjoint());
  return embed_sparse(space, Factor::ProbeBoson, bb);
}

SparseMatrix probe_spin(const SpaceDescriptor& space, PauliAxis axis) {
  return embed_sparse(space, Factor::ProbeSpin, local::pauli(axis));
}

SparseMatrix osc_lowering(const SpaceDescriptor& space) {
  return embed_sparse(space, Factor::Oscillator, local::annihilation(space.osc_dim()));
}

Operator dense(const SpaceDescriptor& space, const SparseMatrix& m) { return {space, Matrix(m)}; }

}  // namespace

SparseMatrix build_htot_fw_sparse(const MeasurementSetup& setup, const DiracParams& p,
                                  const SpaceDescriptor& space, double t) {
  if (setup.scheme != Scheme::FwOptical) throw ConfigError("setup is not an optical-probe scheme");
  require_probe_boson(space);
  const SparseMatrix nb = probe_number(space);
  const SparseMatrix x1 = quadrature_fw_sparse(1, t, p, space);
  return fw_hamiltonian_sparse(p, space) + setup.omega_b * nb + setup.g * SparseMatrix(x1 * nb);
}

Operator build_htot_fw(const MeasurementSetup& setup, const DiracParams& p,
                       const SpaceDescriptor& space, double t) {
  return dense(space, build_htot_fw_sparse(setup, p, space, t));
}

SparseMatrix build_vm_spin_probe_sparse(const MeasurementSetup& setup, const DiracParams& p,
                                        const SpaceDescriptor& space) {
  require_spin_probe(setup, space);
  const SparseMatrix wr = frequency_strong_sparse(p.epsilon, space);
  const SparseMatrix sx = probe_spin(space, PauliAxis::X);
  const SparseMatrix mix = probe_spin(space, PauliAxis::Z) - kI * probe_spin(space, PauliAxis::Y);
  const SparseMatrix t = osc_lowering(space) * mix;
  const SparseMatrix coupling = SparseMatrix(t + SparseMatrix(t.adjoint())) * probe_quadrature(space);
  return 0.5 * SparseMatrix(wr * sx) + (setup.g * p.x_zpt) * coupling;
}

Operator build_vm_spin_probe(const MeasurementSetup& setup, const DiracParams& p,
                             const SpaceDescriptor& space) {
  return dense(space, build_vm_spin_probe_sparse(setup, p, space));
}

SparseMatrix build_htot_spin_probe_sparse(const MeasurementSetup& setup, const DiracParams& p,
                                          const SpaceDescriptor& space, SystemHamiltonian sys) {
  require_spin_probe(setup, space);
  const SparseMatrix h = sys == SystemHamiltonian::Extreme ? h_r_sparse(p, space)
                                                           : build_h_dirac_sparse(p, space);
  return h + setup.omega_b * probe_number(space) + setup.omega_s * probe_spin(space, PauliAxis::Z) +
         build_vm_spin_probe_sparse(setup, p, space);
}

BackactionPrediction predict_backaction(const MeasurementSetup& setup, const DiracParams&) {
  const double nb = std::norm(setup.beta);
  return {-setup.g * nb, setup.g * setup.g * nb, nb, nb};
}

double heisenberg_residual(const OperatorBuilder& op, const OperatorBuilder& h,
                           const OperatorBuilder& rhs, double t, const std::vector<Index>& interior) {
  constexpr double delta = 1e-6;
  const Operator o = op(t);
  const Matrix dodt = (op(t + delta).matrix() - op(t - delta).matrix()) / (2.0 * delta);
  const Matrix total = kI * commutator(h(t), o).matrix() + dodt - rhs(t).matrix();
  return interior_max_abs(total, interior);
}

Operator spin_probe_rhs_sx(const MeasurementSetup& setup, const SpaceDescriptor& space) {
  require_spin_probe(setup, space);
  const double c = std::numbers::sqrt2 * setup.g;  // g / p_zpt
  const SparseMatrix mix = probe_spin(space, PauliAxis::Z) - kI * probe_spin(space, PauliAxis::Y);
  const SparseMatrix t = osc_lowering(space) * mix;
  const SparseMatrix m = -2.0 * setup.omega_s * probe_spin(space, PauliAxis::Y) -
                         (kI * c) * SparseMatrix(SparseMatrix(t - SparseMatrix(t.adjoint())) *
                                                 probe_quadrature(space));
  return dense(space, m);
}

Operator spin_probe_rhs_sy(const MeasurementSetup& setup, const DiracParams& p,
                           const SpaceDescriptor& space) {
  require_spin_probe(setup, space);
  const double c = setup.g / p.p_zpt;
  const SparseMatrix t = osc_lowering(space) * probe_spin(space, PauliAxis::X);
  const SparseMatrix m =
      -SparseMatrix(frequency_strong_sparse(p.epsilon, space) * probe_spin(space, PauliAxis::Z)) +
      2.0 * setup.omega_s * probe_spin(space, PauliAxis::X) +
      c * SparseMatrix(SparseMatrix(t + SparseMatrix(t.adjoint())) * probe_quadrature(space));
  return dense(space, m);
}

Operator spin_probe_rhs_sz(const MeasurementSetup& setup, const DiracParams& p,
                           const SpaceDescriptor& space) {
  require_spin_probe(setup, space);
  const double c = setup.g / p.p_zpt;
  const SparseMatrix t = osc_lowering(space) * probe_spin(space, PauliAxis::X);
  const SparseMatrix m =
      SparseMatrix(frequency_strong_sparse(p.epsilon, space) * probe_spin(space, PauliAxis::Y)) +
      (kI * c) * SparseMatrix(SparseMatrix(t - SparseMatrix(t.adjoint())) * probe_quadrature(space));
  return dense(space, m);
}

Operator weak_perturbative_rhs_x1(const DiracParams& p, const SpaceDescriptor& space, double t) {
  const SparseMatrix sz = embed_sparse(space, Factor::DiracSpin, local::pauli(PauliAxis::Z));
  const SparseMatrix n = embed_sparse(
      space, Factor::Oscillator, local::diagonal(space.osc_dim(), [](int k) { return cplx(k); }));
  SparseMatrix id(space.dim(), space.dim());
  id.setIdentity();
  const SparseMatrix x1 = quadrature_weak_sparse(1, t, space);
  const SparseMatrix x2 = quadrature_weak_sparse(2, t, space);
  const SparseMatrix inner = kI * x1 + SparseMatrix(x2 * SparseMatrix(2.0 * n - sz + id));
  return dense(space, (-0.5 * p.epsilon) * SparseMatrix(sz * inner));
}

Operator strong_perturbative_rhs_x1(const DiracParams& p, const SpaceDescriptor& space, double t) {
  const SparseMatrix inv_n = embed_sparse(
      space, Factor::Oscillator,
      local::diagonal(space.osc_dim(), [](int k) { return cplx(k == 0 ? 0.0 : 1.0 / k); }));
  const SparseMatrix wr = frequency_strong_sparse(p.epsilon, space);
  const SparseMatrix x1 = quadrature_strong_sparse(1, t, p.epsilon, space);
  const SparseMatrix x2 = quadrature_strong_sparse(2, t, p.epsilon, space);
  const SparseMatrix term = SparseMatrix(kI * x1 - x2) * SparseMatrix(wr * inv_n);
  return dense(space, (1.0 / (8.0 * p.epsilon)) * SparseMatrix(term - SparseMatrix(term.adjoint())));
}

std::vector<double> polyfit(const std::vector<double>& t, const std::vector<double>& y, int degree,
                            double t_from) {
  if (t.size() != y.size()) throw DimensionError("polyfit: length mismatch");
  std::vector<Index> rows;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] >= t_from) rows.push_back(Index(i));
  }
  if (degree < 0 || Index(rows.size()) <= degree) throw ConfigError("polyfit: not enough samples");
  Eigen::MatrixXd a(rows.size(), degree + 1);
  Eigen::VectorXd b(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    double v = 1.0;
    for (int d = 0; d <= degree; ++d) {
      a(Index(r), d) = v;
      v *= t[rows[r]];
    }
    b(Index(r)) = y[rows[r]];
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
  return {c.data(), c.data() + c.size()};
}

}  // namespace dqnd
