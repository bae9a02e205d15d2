#pragma once

// Spin-probe measurement near the extreme relativistic limit: the full probe (boson + spin)
// model against the effective coupling g X1r(t) (b + b^dagger).

#include <complex>
#include <string>
#include <vector>

#include "dqnd/measurement.hpp"

namespace dqnd {

struct SpinProbeRun {
  double epsilon = 100.0;
  std::complex<double> alpha = 7.0710678118654752440;  // <n> = 50
  std::complex<double> c1 = 0.70710678118654752440;
  std::complex<double> c2 = 0.70710678118654752440;
  std::complex<double> beta = 0.0;
  double g = 0.01;
  double omega_b = 10.0;
  double omega_s = -1.0;           // < 0: 1e-3 <|omega_r|> of the initial state
  double t_final = 2.0;
  int osc_dim = 0;                 // 0: automatic
  int probe_dim = 0;               // 0: automatic
  double leakage_limit = 1e-6;
  SystemHamiltonian system = SystemHamiltonian::Extreme;
};

struct EffectiveVmReport {
  double fidelity;
  double omega_r_mean;        // <|omega_r|> of the initial state
  double omega_s;
  double omega_ratio;         // <|omega_r|> / omega_s
  double excitation;          // <n> of the initial state
  double strength;            // g / sqrt(<n>)
  bool regime_ok;             // omega_ratio > 10 and strength < 0.1
  std::vector<std::string> warnings;
  int osc_dim;
  int probe_dim;
  double leakage;             // worst of oscillator and probe tails, both models
};

/// <|omega_r|> in the product state |alpha> (c1|up> + c2|down>).
double mean_abs_omega_r(std::complex<double> alpha, double epsilon, int osc_dim);

/// Fidelity sum_ps |<phi_eff (x) ps | psi_full>|^2 at t_final, with the probe spin starting up.
/// Both models are time-independent (the effective one in the interaction frame of H_r, where
/// g X1r(t) becomes g x), so each is a single exact exponential. TruncationError on leakage.
EffectiveVmReport effective_vm_check(const SpinProbeRun& run);

/// <s_z(t)> under (omega_r / 2) s_x alone, starting from |n, +/-> (x) |up_s>, where +/- are the
/// sigma_y eigenstates of the dirac spin.
std::vector<double> spin_rotation_trace(int n, int sy_sign, double epsilon,
                                        const std::vector<double>& times);

}  // namespace dqnd
