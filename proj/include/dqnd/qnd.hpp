#pragma once

// QND quadrature pairs X1, X2 in the weak, extreme and general (FW / Dirac) regimes.
// Time enters analytically; every builder can return the explicit time derivative instead.

#include <complex>

#include "dqnd/fw.hpp"

namespace dqnd {

enum class Regime { Weak, WeakNextOrder, Strong, FwGeneral, DiracGeneral };

struct QuadratureSpec {
  int index;  // 1 or 2
  Regime regime;
  double time;
  DiracParams params;
};

enum class Part { Value, TimeDerivative };

// Sparse builders over any space with oscillator and dirac spin (probe factors get identity).
SparseMatrix quadrature_fw_sparse(int index, double t, const DiracParams& p,
                                  const SpaceDescriptor& space, Part part = Part::Value);
/// x cos t - p sz sin t  /  x sz sin t + p cos t
SparseMatrix quadrature_weak_sparse(int index, double t, const SpaceDescriptor& space,
                                    Part part = Part::Value);
/// x_zpt (a e^{i sz t} + h.c.)  /  -i x_zpt (a e^{i sz t} - h.c.)
SparseMatrix quadrature_weak_exponential_sparse(int index, double t, const SpaceDescriptor& space);
SparseMatrix quadrature_weak_next_order_sparse(int index, double t, double epsilon,
                                               const SpaceDescriptor& space,
                                               Part part = Part::Value);
SparseMatrix quadrature_strong_sparse(int index, double t, double epsilon,
                                      const SpaceDescriptor& space, Part part = Part::Value);

Operator quadrature_fw(const QuadratureSpec& spec, const SpaceDescriptor& space);
Operator quadrature_weak(const QuadratureSpec& spec, const SpaceDescriptor& space);
Operator quadrature_weak_next_order(const QuadratureSpec& spec, const SpaceDescriptor& space);
Operator quadrature_strong(const QuadratureSpec& spec, const SpaceDescriptor& space);
/// U^dagger X_F U
Operator quadrature_dirac(const QuadratureSpec& spec, const FwUnitary& u,
                          const SpaceDescriptor& space);

/// Any regime; DiracGeneral needs `u`. ContractError on a bad index or missing unitary.
Operator quadrature(const QuadratureSpec& spec, const SpaceDescriptor& space,
                    const FwUnitary* u = nullptr, Part part = Part::Value);

/// sqrt(2/eps) (sqrt(max(n-1, 0)) - sqrt(n)) on level n.
double strong_frequency_factor(int n, double epsilon);
SparseMatrix frequency_strong_sparse(double epsilon, const SpaceDescriptor& space);
FrequencyOperator frequency_operator_strong(const DiracParams& p, const SpaceDescriptor& space);

/// mc^2 sz + (n + 1/2) sz - 1/2
SparseMatrix h_nr_sparse(const DiracParams& p, const SpaceDescriptor& space);
/// -sy sqrt(2 n / eps)
SparseMatrix h_r_sparse(const DiracParams& p, const SpaceDescriptor& space);

enum class Representation { Fw, Dirac };

/// |alpha> (x) (c1|up> + c2|down>) in the FW frame, U^dagger of it in the Dirac frame.
/// ContractError unless |c1|^2 + |c2|^2 = 1 within 1e-12; the space must be oscillator (x) spin.
StateVector min_uncertainty_state(cplx alpha, cplx c1, cplx c2, Representation rep,
                                  const FwUnitary* u, const SpaceDescriptor& space);

}  // namespace dqnd
