#pragma once

// Time stepping. The dense engine exponentiates H at step midpoints through its eigensystem;
// the Chebyshev stepper applies exp(-i H dt) to a vector with banded H.

#include <functional>
#include <string>
#include <vector>

#include "dqnd/banded.hpp"
#include "dqnd/hilbert.hpp"
#include "dqnd/timeseries.hpp"

namespace dqnd {

using OperatorBuilder = std::function<Operator(double t)>;

struct Observable {
  std::string name;
  OperatorBuilder op;  // hermitian, may depend on t
};

struct PropagationOptions {
  double max_step = 0.01;
  bool time_independent = false;  // H(t) = H(0): evolve grid point to grid point exactly
  double leakage_limit = 1e-6;
  int leakage_margin = 4;         // leakage = weight at n >= osc_dim - margin
  double halving_tolerance = 1e-5;
  bool halving_check = true;
  double norm_drift_limit = 1e-9;  // per unit time
};

/// exp(-i H(t_mid) dt) stepping; records observables at every grid time (t_grid[0] must be 0).
/// TruncationError on leakage, AccuracyError when the half-step rerun disagrees.
TimeSeries propagate(const OperatorBuilder& h, const StateVector& psi0,
                     const std::vector<double>& t_grid, const std::vector<Observable>& observables,
                     const PropagationOptions& options = {});

/// The state reached at the last grid time by the same stepping, without observables.
Vector propagate_state(const OperatorBuilder& h, const Vector& psi0, const std::vector<double>& t_grid,
                       double step, bool time_independent);

/// 1 - weight below n = osc_dim - margin.
double oscillator_leakage(const SpaceDescriptor& space, const Vector& psi, int margin = 4);

class ChebyshevStepper {
 public:
  explicit ChebyshevStepper(Index n = 0) { resize(n); }
  void resize(Index n);

  /// psi <- exp(-i H dt) psi for hermitian banded H; returns the number of terms used.
  int step(const BandedMatrix& h, double dt, Vector& psi, double tol = 1e-15);
  /// Same with caller-supplied spectral bounds [lo, hi]; the expansion is reused while
  /// (hi - lo) dt and tol stay the same.
  int step(const BandedMatrix& h, double lo, double hi, double dt, Vector& psi, double tol = 1e-15);

 private:
  Vector prev_, cur_, next_, acc_;
  std::vector<cplx> coeffs_;
  double coeff_x_ = -1.0;
  double coeff_tol_ = -1.0;
};

}  // namespace dqnd
