#pragma once

// Probe couplings, Heisenberg-equation residuals and the analytic backaction laws.

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "dqnd/propagator.hpp"
#include "dqnd/qnd.hpp"

namespace dqnd {

enum class Scheme { FwOptical, SpinProbe };

struct MeasurementSetup {
  Scheme scheme = Scheme::FwOptical;
  double g = 0.1;
  double omega_b = 1.0;
  double omega_s = 0.0;
  cplx alpha = 0.5;
  cplx c1 = 0.70710678118654752440;
  cplx c2 = 0.70710678118654752440;
  cplx beta = 2.0;
  int probe_spin_initial = 0;  // 0 = up
  std::vector<double> t_grid;
};

struct BackactionPrediction {
  double x2_mean_slope;
  double x2_var_quadratic_coeff;
  double n_b_mean;
  double n_b_var;
};

/// H_F + omega_b n_b + g X1F(t) n_b. ConfigError without a probe boson.
SparseMatrix build_htot_fw_sparse(const MeasurementSetup& setup, const DiracParams& p,
                                  const SpaceDescriptor& space, double t);
Operator build_htot_fw(const MeasurementSetup& setup, const DiracParams& p,
                       const SpaceDescriptor& space, double t);

/// (omega_r / 2) s_x + g x_zpt [a (s_z - i s_y) + h.c.](b^dagger + b), Pauli probe spin.
SparseMatrix build_vm_spin_probe_sparse(const MeasurementSetup& setup, const DiracParams& p,
                                        const SpaceDescriptor& space);
Operator build_vm_spin_probe(const MeasurementSetup& setup, const DiracParams& p,
                             const SpaceDescriptor& space);

/// H_sys + omega_b n_b + omega_s s_z + V_m with H_sys = H_r (default) or H_D.
enum class SystemHamiltonian { Extreme, Dirac };
SparseMatrix build_htot_spin_probe_sparse(const MeasurementSetup& setup, const DiracParams& p,
                                          const SpaceDescriptor& space,
                                          SystemHamiltonian sys = SystemHamiltonian::Extreme);

/// slope -g |beta|^2, quadratic coefficient g^2 |beta|^2 (natural units).
BackactionPrediction predict_backaction(const MeasurementSetup& setup, const DiracParams& p);

/// || i [H(t), O(t)] + dO/dt - RHS(t) || over the interior block (max-abs entry), with dO/dt by
/// a centred difference of width 2 * 1e-6.
double heisenberg_residual(const OperatorBuilder& op, const OperatorBuilder& h,
                           const OperatorBuilder& rhs, double t, const std::vector<Index>& interior);

/// Exact-commutator right-hand sides of the probe-spin equations, Pauli convention.
Operator spin_probe_rhs_sx(const MeasurementSetup& setup, const SpaceDescriptor& space);
Operator spin_probe_rhs_sy(const MeasurementSetup& setup, const DiracParams& p,
                           const SpaceDescriptor& space);
Operator spin_probe_rhs_sz(const MeasurementSetup& setup, const DiracParams& p,
                           const SpaceDescriptor& space);

/// First-order weak-regime right-hand side for dX1nr/dt:
/// -(sz eps / 2) [i X1nr + X2nr (2n - sz + 1)].
Operator weak_perturbative_rhs_x1(const DiracParams& p, const SpaceDescriptor& space, double t);
/// Near-extreme right-hand side for dX1r/dt: (1 / 8 eps) [(i X1r - X2r) omega_r / n - h.c.],
/// with 1/n set to 0 at n = 0.
Operator strong_perturbative_rhs_x1(const DiracParams& p, const SpaceDescriptor& space, double t);

/// Least-squares polynomial fit (degree 1 or 2) of y(t) over samples with t >= t_from;
/// returns coefficients from the constant term upward.
std::vector<double> polyfit(const std::vector<double>& t, const std::vector<double>& y, int degree,
                            double t_from = 0.0);

}  // namespace dqnd
