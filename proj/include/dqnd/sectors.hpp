#pragma once

// Optical-probe dynamics split by probe photon number. The coupling g X n_b conserves n_b, so
// every photon number k evolves the system alone under H + g k X, and the probe's coherent
// amplitude only supplies the Poisson weight of each sector. The omega_b k term is a sector-wide
// phase and drops out of every system observable.

#include <complex>
#include <vector>

#include "dqnd/timeseries.hpp"

namespace dqnd {

struct OpticalRun {
  double epsilon = 0.1;
  std::complex<double> alpha = 0.5;
  std::complex<double> c1 = 0.70710678118654752440;
  std::complex<double> c2 = 0.70710678118654752440;
  std::complex<double> beta = 2.0;
  double g = 0.1;
  std::vector<double> t_grid;
  int probe_dim = 0;        // photon numbers 0 .. probe_dim-1; 0 picks |beta|^2 + 6|beta| + 10
  int osc_dim = 0;          // 0: per-sector automatic cutoff
  double max_step = 0.02;   // upper bound on the Magnus step of time-dependent runs
  bool halving_check = true;
  double leakage_limit = 1e-6;
  double weight_floor = 1e-12;  // sectors lighter than this are skipped and reported as tail
  int threads = 0;              // 0: DIRAC_QND_THREADS or hardware concurrency
};

struct SectorReport {
  int k;
  double weight;
  int osc_dim;
  double leakage;
  long chebyshev_terms;
  double step;  // 0 for exact frame evolution
};

struct SectorRunResult {
  TimeSeries series;
  std::vector<SectorReport> sectors;
  double probe_tail = 0.0;   // Poisson weight outside the simulated sectors
  double step = 0.0;         // largest sector step (0 for exact frame evolution)
  double halving_distance = 0.0;
};

/// Poisson weights |<k|beta>|^2 for k < probe_dim, renormalized over the truncation.
std::vector<double> probe_weights(std::complex<double> beta, int probe_dim);
int default_probe_dim(std::complex<double> beta);

/// Hardware concurrency capped by DIRAC_QND_THREADS and by `requested` when positive.
int worker_count(int requested);

/// FW frame, H = H_F + g X1F(t) n_b. Observables X1F, X2F and the physical x, p (U x U^dagger).
SectorRunResult run_fw_optical(const OpticalRun& run);

/// Dirac frame, H = H_D + g X1nr(t) n_b, starting from U^dagger |alpha>(c1|up> + c2|down>).
/// Observables X1nr, X2nr, x, p.
SectorRunResult run_dirac_weak_optical(const OpticalRun& run);

}  // namespace dqnd
