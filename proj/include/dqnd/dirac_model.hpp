#pragma once

// (1+1)D Dirac oscillator: H = eta s- a + eta* s+ a^dagger + mc^2 sz, in units hbar = m = omega = 1.

#include "dqnd/hilbert.hpp"

namespace dqnd {

struct DiracParams {
  double epsilon;  // hbar omega / mc^2
  double mc2;
  cplx eta;
  double x_zpt;
  double p_zpt;

  /// DomainError unless epsilon is finite and positive.
  static DiracParams from_epsilon(double epsilon);
};

enum class Branch { Plus, Minus };

/// sqrt(1 + 2 n eps) with n real so callers can evaluate at n+1, n+2 without casts.
double level_root(double n, double epsilon);

/// E_n^+ = mc^2 sqrt(1 + 2 n eps), E_n^- = -E_{n+1}^+. DomainError for n < 0.
double analytic_energy(int n, Branch branch, const DiracParams& p);

struct DressedCoeffs {
  int n;
  double A;
  double B;
};

/// DomainError for n < 1.
DressedCoeffs dressed_coeffs(int n, const DiracParams& p);

/// (A_n, B_n) for any n >= 0, with (1, 0) at n = 0. No domain check on n = 0.
std::pair<double, double> dressed_ab(int n, double epsilon);

/// ConfigError unless the space has an oscillator and a dirac spin.
void require_dirac_space(const SpaceDescriptor& space);

/// Sparse H_D over the full space; `coupling = false` drops the eta terms.
SparseMatrix build_h_dirac_sparse(const DiracParams& p, const SpaceDescriptor& space,
                                  bool coupling = true);
Operator build_h_dirac(const DiracParams& p, const SpaceDescriptor& space, bool coupling = true);

/// |E_n^+> = A_n|n,up> - i B_n|n-1,down>, |E_n^-> = B_{n+1}|n+1,up> + i A_{n+1}|n,down>.
/// The space must be oscillator (x) dirac spin only. TruncationError when n + 1 >= osc_dim.
StateVector dressed_state(int n, Branch branch, const DiracParams& p, const SpaceDescriptor& space);

}  // namespace dqnd
