#include "dqnd/sectors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <memory>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "dqnd/banded.hpp"
#include "dqnd/fw.hpp"
#include "dqnd/propagator.hpp"
#include "dqnd/qnd.hpp"

namespace dqnd {

namespace {

constexpr double kXzpt = 0.70710678118654752440;
constexpr int kLeakMargin = 4;
constexpr double kStepRadius = 1.5;
constexpr double kGrowTrigger = 1e-13;
constexpr double kGrowFactor = 1.25;
constexpr int kMaxOscDim = 20000;

struct SectorTrace {
  std::vector<std::vector<double>> mean;    // [observable][sample]
  std::vector<std::vector<double>> second;  // <O^2>
  std::vector<double> leakage;
  long terms = 0;
  double step = 0.0;
  int osc_dim = 0;  // cutoff at the end of the run
  bool aborted = false;
  Vector final_state;
};

void check_run(const OpticalRun& run) {
  if (run.t_grid.empty() || run.t_grid.front() != 0.0) throw ConfigError("time grid must start at 0");
  for (std::size_t i = 1; i < run.t_grid.size(); ++i) {
    if (!(run.t_grid[i] > run.t_grid[i - 1])) throw ConfigError("time grid must be strictly increasing");
  }
  if (!(run.g >= 0.0) || !std::isfinite(run.g)) throw ConfigError("g must be finite and >= 0");
  if (!(run.max_step > 0.0)) throw ConfigError("step must be positive");
  if (run.osc_dim != 0 && run.osc_dim < 8) throw ConfigError("oscillator cutoff must be >= 8");
  if (run.probe_dim < 0 || run.probe_dim == 1) throw ConfigError("probe cutoff must be >= 2");
}

// Resonant displacement bound; exact reach of the FW-frame drive.
int resonant_osc_dim(const OpticalRun& run, int k) {
  const double reach = std::abs(run.alpha) + run.g * k * run.t_grid.back() * kXzpt + 1.0;
  const int n = int(std::ceil((reach + 4.5) * (reach + 4.5))) + 2 * kLeakMargin;
  return std::max(n, std::max(16, int(std::ceil(4.0 * std::norm(run.alpha))) + 1));
}

// Detuning of the Dirac levels caps the displacement well below the resonant bound, so the
// Dirac-frame sectors start small and grow on leakage.
int detuned_osc_dim(const OpticalRun& run, int k) {
  const double drive = run.g * k * run.t_grid.back() / (4.0 * std::numbers::pi);
  const int n = 32 + int(std::ceil(24.0 * drive + 4.0 * std::norm(run.alpha)));
  return std::min(n, resonant_osc_dim(run, k));
}

BandedMatrix banded(const SparseMatrix& m) { return BandedMatrix::from_sparse(m); }

struct Moments {
  double mean;
  double second;
};

Moments moments(const Vector& psi, const Vector& opsi) {
  return {psi.dot(opsi).real(), opsi.squaredNorm()};
}

double leakage_of(const Vector& psi, int osc_dim) {
  const Index start = 2 * Index(osc_dim - kLeakMargin);
  double tail = 0.0;
  for (Index i = start; i < psi.size(); ++i) tail += std::norm(psi(i));
  return tail;
}

Vector fw_initial(const OpticalRun& run, const SpaceDescriptor& space) {
  return min_uncertainty_state(run.alpha, run.c1, run.c2, Representation::Fw, nullptr, space).amplitudes();
}

// ---- FW frame ---------------------------------------------------------------------------

// In the interaction frame of H_F the coupling g k X1F(t) becomes g k x exactly, so each sector
// is a time-independent problem; lab-frame states are recovered with the diagonal H_F phases.
SectorTrace fw_sector(const OpticalRun& run, const DiracParams& p, int k, int osc_dim,
                      double abort_above) {
  const SpaceDescriptor space = make_space(osc_dim, true);
  const SparseMatrix a = embed_sparse(space, Factor::Oscillator, local::annihilation(osc_dim));
  const SparseMatrix ad = SparseMatrix(a.adjoint());
  const SparseMatrix xs = kXzpt * (a + ad);
  const SparseMatrix ps = cplx(0.0, -kXzpt) * (a - ad);
  const SparseMatrix u = fw_unitary_sparse(p, space);
  const SparseMatrix ud = SparseMatrix(u.adjoint());
  const BandedMatrix x = banded(xs), pm = banded(ps);
  const BandedMatrix x_phys = banded(SparseMatrix(u * xs * ud));
  const BandedMatrix p_phys = banded(SparseMatrix(u * ps * ud));
  const BandedMatrix h_frame = banded(SparseMatrix((run.g * k) * xs));
  Eigen::VectorXd energy(space.dim());
  for (int n = 0; n < osc_dim; ++n) {
    energy(space.index(n, 0)) = fw_energy(n, 0, p);
    energy(space.index(n, 1)) = fw_energy(n, 1, p);
  }

  SectorTrace tr;
  tr.mean.assign(4, {});
  tr.second.assign(4, {});
  Vector chi = fw_initial(run, space);
  Vector lab(chi.size()), tmp(chi.size());
  ChebyshevStepper stepper(chi.size());
  for (std::size_t j = 0; j < run.t_grid.size(); ++j) {
    const double t = run.t_grid[j];
    if (j > 0 && k > 0 && run.g > 0.0) tr.terms += stepper.step(h_frame, t - run.t_grid[j - 1], chi);
    for (Index i = 0; i < chi.size(); ++i) lab(i) = std::polar(1.0, -energy(i) * t) * chi(i);
    const std::pair<const BandedMatrix*, const Vector*> probes[4] = {
        {&x, &chi}, {&pm, &chi}, {&x_phys, &lab}, {&p_phys, &lab}};
    for (int o = 0; o < 4; ++o) {
      probes[o].first->matvec(*probes[o].second, tmp);
      const Moments m = moments(*probes[o].second, tmp);
      tr.mean[o].push_back(m.mean);
      tr.second[o].push_back(m.second);
    }
    tr.leakage.push_back(leakage_of(chi, osc_dim));
    if (tr.leakage.back() > abort_above) {
      tr.aborted = true;
      return tr;
    }
  }
  tr.final_state = lab;
  return tr;
}

// ---- Dirac frame, weak-regime coupling --------------------------------------------------

struct DiracSectorOps {
  BandedMatrix h_d, x, p_sz, x_sz, p, work;
};

DiracSectorOps dirac_ops(const DiracParams& prm, const SpaceDescriptor& space) {
  const std::vector<std::ptrdiff_t> layout = {-2, -1, 0, 1, 2};
  const SparseMatrix a = embed_sparse(space, Factor::Oscillator, local::annihilation(space.osc_dim()));
  const SparseMatrix ad = SparseMatrix(a.adjoint());
  const SparseMatrix sz = embed_sparse(space, Factor::DiracSpin, local::pauli(PauliAxis::Z));
  const SparseMatrix xs = kXzpt * (a + ad);
  const SparseMatrix ps = cplx(0.0, -kXzpt) * (a - ad);
  DiracSectorOps ops;
  ops.h_d = BandedMatrix::from_sparse(build_h_dirac_sparse(prm, space), layout);
  ops.x = BandedMatrix::from_sparse(xs, layout);
  ops.p_sz = BandedMatrix::from_sparse(SparseMatrix(ps * sz), layout);
  ops.x_sz = BandedMatrix::from_sparse(SparseMatrix(xs * sz), layout);
  ops.p = BandedMatrix::from_sparse(ps, layout);
  ops.work = ops.h_d;
  return ops;
}

// work = h_d + gk (cx x - sx p sz)
void set_hamiltonian(DiracSectorOps& ops, double gk, double cx, double sx) {
  ops.work.assign_combination({{1.0, &ops.h_d}, {gk * cx, &ops.x}, {-gk * sx, &ops.p_sz}});
}

// Bounds valid for every t: |cos t| + |sin t| <= sqrt(2) on the two drive terms.
std::pair<double, double> drive_bounds(const DiracSectorOps& ops, double gk) {
  const auto [lo, hi] = ops.h_d.spectral_bounds();
  const auto [xlo, xhi] = ops.x.spectral_bounds();
  const auto [plo, phi] = ops.p_sz.spectral_bounds();
  const double pad = std::sqrt(2.0) * gk * std::max({-xlo, xhi, -plo, phi});
  return {lo - pad, hi + pad};
}

// Fourth-order commutator-free Magnus step: two exponentials of Gauss-node combinations.
long advance_dirac(DiracSectorOps& ops, double gk, double t0, double t1, double step, Vector& psi,
                   ChebyshevStepper& stepper) {
  static const double c1 = 0.5 - std::sqrt(3.0) / 6.0, c2 = 0.5 + std::sqrt(3.0) / 6.0;
  static const double w1 = 0.5 + std::sqrt(3.0) / 3.0, w2 = 0.5 - std::sqrt(3.0) / 3.0;
  const auto [lo, hi] = drive_bounds(ops, gk);
  const int nsub = std::max(1, int(std::ceil((t1 - t0) / step - 1e-9)));
  const double dt = (t1 - t0) / nsub;
  long terms = 0;
  for (int s = 0; s < nsub; ++s) {
    const double ta = t0 + (s + c1) * dt, tb = t0 + (s + c2) * dt;
    const double ca = std::cos(ta), sa = std::sin(ta), cb = std::cos(tb), sb = std::sin(tb);
    set_hamiltonian(ops, gk, w1 * ca + w2 * cb, w1 * sa + w2 * sb);
    terms += stepper.step(ops.work, lo, hi, 0.5 * dt, psi);
    set_hamiltonian(ops, gk, w2 * ca + w1 * cb, w2 * sa + w1 * sb);
    terms += stepper.step(ops.work, lo, hi, 0.5 * dt, psi);
  }
  return terms;
}

Vector dirac_initial(const OpticalRun& run, const DiracParams& p, const SpaceDescriptor& space) {
  const Vector fw = fw_initial(run, space);
  Vector d = SparseMatrix(fw_unitary_sparse(p, space).adjoint()) * fw;
  return d / d.norm();
}

// The Magnus expansion only converges for |H| dt below pi; the step follows the sector's
// spectral radius so fast interbranch phases stay resolved.
double sector_step(const OpticalRun& run, const DiracSectorOps& ops, double gk) {
  const auto [lo, hi] = drive_bounds(ops, gk);
  return std::min(run.max_step, kStepRadius / (0.5 * (hi - lo)));
}

// With `grow` the cutoff expands in place: an interval whose end state reaches the edge is
// redone from its padded start state on the larger space, so the result matches a run that used
// the final cutoff throughout.
SectorTrace dirac_sector(const OpticalRun& run, const DiracParams& prm, int k, int osc_dim,
                         double abort_above, bool grow, double refine = 1.0) {
  DiracSectorOps ops = dirac_ops(prm, make_space(osc_dim, true));
  const double gk = run.g * k;
  double step = sector_step(run, ops, gk) / refine;
  SectorTrace tr;
  tr.mean.assign(4, {});
  tr.second.assign(4, {});
  Vector psi = dirac_initial(run, prm, make_space(osc_dim, true));
  Vector vx(psi.size()), vpsz(psi.size()), vxsz(psi.size()), vp(psi.size()), saved;
  auto stepper = std::make_unique<ChebyshevStepper>(psi.size());
  for (std::size_t j = 0; j < run.t_grid.size(); ++j) {
    const double t = run.t_grid[j];
    if (j > 0) {
      saved = psi;
      tr.terms += advance_dirac(ops, gk, run.t_grid[j - 1], t, step, psi, *stepper);
      while (grow && leakage_of(psi, osc_dim) > kGrowTrigger) {
        const int larger = int(std::ceil(osc_dim * kGrowFactor)) + 2 * kLeakMargin;
        if (larger > kMaxOscDim) {
          std::ostringstream os;
          os << "sector k = " << k << " outgrows the largest cutoff " << kMaxOscDim;
          throw TruncationError(os.str(), larger);
        }
        osc_dim = larger;
        ops = dirac_ops(prm, make_space(osc_dim, true));
        step = sector_step(run, ops, gk) / refine;
        stepper = std::make_unique<ChebyshevStepper>(2 * Index(osc_dim));
        psi = Vector::Zero(2 * Index(osc_dim));
        psi.head(saved.size()) = saved;
        saved = psi;
        for (Vector* v : {&vx, &vpsz, &vxsz, &vp}) v->resize(psi.size());
        tr.terms += advance_dirac(ops, gk, run.t_grid[j - 1], t, step, psi, *stepper);
      }
    }
    ops.x.matvec(psi, vx);
    ops.p_sz.matvec(psi, vpsz);
    ops.x_sz.matvec(psi, vxsz);
    ops.p.matvec(psi, vp);
    const double c = std::cos(t), s = std::sin(t);
    const Vector x1 = c * vx - s * vpsz;
    const Vector x2 = s * vxsz + c * vp;
    const Vector* applied[4] = {&x1, &x2, &vx, &vp};
    for (int o = 0; o < 4; ++o) {
      const Moments m = moments(psi, *applied[o]);
      tr.mean[o].push_back(m.mean);
      tr.second[o].push_back(m.second);
    }
    tr.leakage.push_back(leakage_of(psi, osc_dim));
    if (tr.leakage.back() > abort_above) {
      tr.aborted = true;
      return tr;
    }
  }
  tr.step = step;
  tr.osc_dim = osc_dim;
  tr.final_state = psi;
  return tr;
}

// ---- driver ----------------------------------------------------------------------------

template <class F>
void parallel_for(int count, int workers, F body) {
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

using SectorFn = std::function<SectorTrace(int k, int osc_dim, double abort_above)>;
using DimFn = std::function<int(int k)>;

SectorRunResult run_sectors(const OpticalRun& run, const std::vector<std::string>& names,
                            const SectorFn& sector, const DimFn& start_dim,
                            std::vector<Vector>* finals = nullptr) {
  check_run(run);
  const int probe_dim = run.probe_dim > 0 ? run.probe_dim : default_probe_dim(run.beta);
  const std::vector<double> w = probe_weights(run.beta, probe_dim);

  std::vector<int> ks;
  SectorRunResult out;
  for (int k = 0; k < probe_dim; ++k) {
    if (w[k] >= run.weight_floor) {
      ks.push_back(k);
    } else {
      out.probe_tail += w[k];
    }
  }

  const bool fixed = run.osc_dim > 0;
  const double sector_budget = run.leakage_limit * 0.1;
  std::vector<SectorTrace> traces(ks.size());
  std::vector<int> dims(ks.size());
  parallel_for(int(ks.size()), worker_count(run.threads), [&](int i) {
    const int k = ks[i];
    int n = fixed ? run.osc_dim : start_dim(k);
    for (int attempt = 0;; ++attempt) {
      SectorTrace tr = sector(k, n, fixed ? HUGE_VAL : sector_budget);
      if (!tr.aborted) {
        dims[i] = tr.osc_dim > 0 ? tr.osc_dim : n;
        traces[i] = std::move(tr);
        return;
      }
      if (attempt == 8) {
        std::ostringstream os;
        os << "sector k = " << k << " still leaks " << tr.leakage.back() << " at osc_dim = " << n;
        throw TruncationError(os.str(), int(n * 1.6));
      }
      n = int(std::ceil(n * 1.6));
    }
  });

  const std::size_t samples = run.t_grid.size();
  TimeSeries& ts = out.series;
  ts.times = run.t_grid;
  double wsum = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) wsum += w[ks[i]];
  for (std::size_t o = 0; o < names.size(); ++o) {
    ObservableTrace& tr = ts.add(names[o]);
    tr.mean.assign(samples, 0.0);
    tr.variance.assign(samples, 0.0);
    std::vector<double> second(samples, 0.0);
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const double wk = w[ks[i]] / wsum;
      for (std::size_t j = 0; j < samples; ++j) {
        tr.mean[j] += wk * traces[i].mean[o][j];
        second[j] += wk * traces[i].second[o][j];
      }
    }
    for (std::size_t j = 0; j < samples; ++j) {
      tr.variance[j] = std::max(0.0, second[j] - tr.mean[j] * tr.mean[j]);
    }
  }
  ts.leakage.assign(samples, 0.0);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double wk = w[ks[i]] / wsum;
    for (std::size_t j = 0; j < samples; ++j) ts.leakage[j] += wk * traces[i].leakage[j];
    double norm_drift = std::abs(traces[i].final_state.norm() - 1.0);
    ts.max_norm_drift = std::max(ts.max_norm_drift, norm_drift);
    out.sectors.push_back({ks[i], w[ks[i]], dims[i],
                           *std::max_element(traces[i].leakage.begin(), traces[i].leakage.end()),
                           traces[i].terms, traces[i].step});
    out.step = std::max(out.step, traces[i].step);
  }
  if (ts.max_leakage() > run.leakage_limit) {
    std::ostringstream os;
    os << "leakage " << ts.max_leakage() << " exceeds " << run.leakage_limit;
    int worst = 0;
    for (int d : dims) worst = std::max(worst, d);
    throw TruncationError(os.str(), int(worst * 1.4));
  }
  if (ts.max_norm_drift > 1e-9 * std::max(1.0, run.t_grid.back())) {
    std::ostringstream os;
    os << "norm drift " << ts.max_norm_drift;
    throw AccuracyError(os.str(), run.max_step / 2);
  }
  if (finals) {
    finals->clear();
    for (auto& tr : traces) finals->push_back(std::move(tr.final_state));
  }
  return out;
}

}  // namespace

std::vector<double> probe_weights(std::complex<double> beta, int probe_dim) {
  if (probe_dim < 2) throw ConfigError("probe cutoff must be >= 2");
  const Vector c = coherent_amplitudes(probe_dim, beta);
  std::vector<double> w(probe_dim);
  for (int k = 0; k < probe_dim; ++k) w[k] = std::norm(c(k));
  return w;
}

int default_probe_dim(std::complex<double> beta) {
  const double b = std::abs(beta);
  return std::max(2, int(std::ceil(b * b + 6.0 * b + 10.0)));
}

int worker_count(int requested) {
  int n = int(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (const char* env = std::getenv("DIRAC_QND_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  if (requested > 0) n = std::min(n, requested);
  return std::max(1, n);
}

SectorRunResult run_fw_optical(const OpticalRun& run) {
  const DiracParams p = DiracParams::from_epsilon(run.epsilon);
  return run_sectors(run, {"X1F", "X2F", "x", "p"},
                     [&](int k, int n, double abort) { return fw_sector(run, p, k, n, abort); },
                     [&](int k) { return resonant_osc_dim(run, k); });
}

SectorRunResult run_dirac_weak_optical(const OpticalRun& run) {
  const DiracParams p = DiracParams::from_epsilon(run.epsilon);
  std::vector<Vector> finals;
  SectorRunResult res = run_sectors(
      run, {"X1nr", "X2nr", "x", "p"},
      [&](int k, int n, double abort) { return dirac_sector(run, p, k, n, abort, !std::isinf(abort)); },
      [&](int k) { return detuned_osc_dim(run, k); }, &finals);
  if (run.halving_check) {
    double dist2 = 0.0;
    double wsum = 0.0;
    for (const auto& s : res.sectors) wsum += s.weight;
    std::vector<double> d2(res.sectors.size(), 0.0);
    parallel_for(int(res.sectors.size()), worker_count(run.threads), [&](int i) {
      const auto& s = res.sectors[i];
      const bool fixed = run.osc_dim > 0;
      const int start = fixed ? run.osc_dim : detuned_osc_dim(run, s.k);
      const Vector fine = dirac_sector(run, p, s.k, start, HUGE_VAL, !fixed, 2.0).final_state;
      const Vector& coarse = finals[i];
      const Index n = std::max(fine.size(), coarse.size());
      Vector diff = Vector::Zero(n);
      diff.head(fine.size()) += fine;
      diff.head(coarse.size()) -= coarse;
      d2[i] = (s.weight / wsum) * diff.squaredNorm();
    });
    for (double v : d2) dist2 += v;
    res.halving_distance = std::sqrt(dist2);
    if (res.halving_distance > 1e-5) {
      std::ostringstream os;
      os << "half-step rerun differs by " << res.halving_distance << " (step " << res.step << ")";
      throw AccuracyError(os.str(), res.step / 2);
    }
  }
  return res;
}

}  // namespace dqnd
