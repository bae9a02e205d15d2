#include "dqnd/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace dqnd {

// ---- TimeSeries ----------------------------------------------------------------------

ObservableTrace& TimeSeries::add(const std::string& name) {
  if (has(name)) throw ContractError("duplicate observable " + name);
  observables.push_back({name, {}, {}});
  return observables.back();
}

const ObservableTrace& TimeSeries::get(const std::string& name) const {
  for (const auto& o : observables) {
    if (o.name == name) return o;
  }
  throw ContractError("no observable named " + name);
}

bool TimeSeries::has(const std::string& name) const {
  return std::any_of(observables.begin(), observables.end(),
                     [&](const ObservableTrace& o) { return o.name == name; });
}

double TimeSeries::max_leakage() const {
  return leakage.empty() ? 0.0 : *std::max_element(leakage.begin(), leakage.end());
}

// ---- dense engine ---------------------------------------------------------------------

namespace {

void check_grid(const std::vector<double>& t_grid) {
  if (t_grid.empty() || t_grid.front() != 0.0) throw ConfigError("time grid must start at 0");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) throw ConfigError("time grid must be strictly increasing");
  }
}

struct Eigensystem {
  Eigen::VectorXd values;
  Matrix vectors;
};

Eigensystem eigensystem(const Operator& h) {
  h.assert_hermitian(1e-10);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h.matrix() + h.matrix().adjoint()));
  if (es.info() != Eigen::Success) throw AssemblyError("eigendecomposition failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

void apply_exp(const Eigensystem& e, double dt, Vector& psi) {
  Vector c = e.vectors.adjoint() * psi;
  for (Index i = 0; i < c.size(); ++i) c(i) *= std::polar(1.0, -e.values(i) * dt);
  psi = e.vectors * c;
}

double row_sum_norm(const Matrix& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

// Advances psi from t0 to t1 with midpoint steps no longer than `step`.
void advance(const OperatorBuilder& h, double t0, double t1, double step, Vector& psi) {
  const int nsub = std::max(1, int(std::ceil((t1 - t0) / step - 1e-9)));
  const double dt = (t1 - t0) / nsub;
  for (int j = 0; j < nsub; ++j) apply_exp(eigensystem(h(t0 + (j + 0.5) * dt)), dt, psi);
}

double choose_step(const OperatorBuilder& h, const PropagationOptions& o) {
  const double hn = row_sum_norm(h(0.0).matrix());
  return hn > 0.0 ? std::min(o.max_step, 0.1 / hn) : o.max_step;
}

}  // namespace

double oscillator_leakage(const SpaceDescriptor& space, const Vector& psi, int margin) {
  const int cut = space.osc_dim() - margin;
  const Index start = cut <= 0 ? 0 : space.index(cut);
  double tail = 0.0;
  for (Index i = start; i < psi.size(); ++i) tail += std::norm(psi(i));
  return tail / std::max(psi.squaredNorm(), 1e-300);
}

Vector propagate_state(const OperatorBuilder& h, const Vector& psi0, const std::vector<double>& t_grid,
                       double step, bool time_independent) {
  check_grid(t_grid);
  Vector psi = psi0;
  if (time_independent) {
    const Eigensystem e = eigensystem(h(0.0));
    apply_exp(e, t_grid.back(), psi);
    return psi;
  }
  for (std::size_t i = 1; i < t_grid.size(); ++i) advance(h, t_grid[i - 1], t_grid[i], step, psi);
  return psi;
}

TimeSeries propagate(const OperatorBuilder& h, const StateVector& psi0,
                     const std::vector<double>& t_grid, const std::vector<Observable>& observables,
                     const PropagationOptions& options) {
  check_grid(t_grid);
  const SpaceDescriptor& space = psi0.space();
  TimeSeries ts;
  ts.times = t_grid;
  for (const auto& o : observables) ts.add(o.name);

  Vector psi = psi0.amplitudes();
  auto record = [&](double t) {
    for (std::size_t k = 0; k < observables.size(); ++k) {
      const Operator op = observables[k].op(t);
      if (!(op.space() == space)) throw DimensionError("observable " + observables[k].name + ": space mismatch");
      const Vector v = op.matrix() * psi;
      const double mean = psi.dot(v).real();
      double var = v.squaredNorm() - mean * mean;
      if (var < 0.0 && var > -1e-12) var = 0.0;
      ts.observables[k].mean.push_back(mean);
      ts.observables[k].variance.push_back(std::max(var, 0.0));
    }
    const double leak = oscillator_leakage(space, psi, options.leakage_margin);
    ts.leakage.push_back(leak);
    if (leak > options.leakage_limit) {
      std::ostringstream os;
      os << "leakage " << leak << " at t = " << t << " exceeds " << options.leakage_limit;
      throw TruncationError(os.str(), int(std::ceil(space.osc_dim() * 1.5)));
    }
    const double drift = std::abs(psi.norm() - 1.0);
    ts.max_norm_drift = std::max(ts.max_norm_drift, drift);
    if (t > 0.0 && drift > options.norm_drift_limit * std::max(1.0, t)) {
      std::ostringstream os;
      os << "norm drift " << drift << " at t = " << t;
      throw AccuracyError(os.str(), options.max_step / 2);
    }
  };

  record(0.0);
  const double step = options.time_independent ? 0.0 : choose_step(h, options);
  std::optional<Eigensystem> cached;
  if (options.time_independent) cached = eigensystem(h(0.0));
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (cached) {
      apply_exp(*cached, t_grid[i] - t_grid[i - 1], psi);
    } else {
      advance(h, t_grid[i - 1], t_grid[i], step, psi);
    }
    record(t_grid[i]);
  }

  if (!options.time_independent && options.halving_check) {
    const Vector fine = propagate_state(h, psi0.amplitudes(), t_grid, step / 2, false);
    const double dist = (fine - psi).norm();
    if (dist > options.halving_tolerance) {
      std::ostringstream os;
      os << "half-step rerun differs by " << dist << " (step " << step << ")";
      throw AccuracyError(os.str(), step / 2);
    }
  }
  return ts;
}

// ---- Chebyshev --------------------------------------------------------------------------

void ChebyshevStepper::resize(Index n) {
  prev_.setZero(n);
  cur_.setZero(n);
  next_.setZero(n);
  acc_.setZero(n);
}

int ChebyshevStepper::step(const BandedMatrix& h, double dt, Vector& psi, double tol) {
  const auto [lo, hi] = h.spectral_bounds();
  return step(h, lo, hi, dt, psi, tol);
}

int ChebyshevStepper::step(const BandedMatrix& h, double lo, double hi, double dt, Vector& psi,
                           double tol) {
  const Index n = h.size();
  if (psi.size() != n) throw DimensionError("Chebyshev step: size mismatch");
  if (prev_.size() != n) resize(n);
  const auto& k = kernels::active();
  const auto view = h.view();

  const double centre = 0.5 * (hi + lo);
  const double radius = std::max(0.5 * (hi - lo) * 1.001, 1e-12);
  const double x = radius * dt;

  // exp(-i (c + r s) dt) = exp(-i c dt) sum_k (2 - delta_k0) (-i)^k J_k(r dt) T_k(s)
  if (x != coeff_x_ || tol != coeff_tol_) {
    static const cplx kPowI[4] = {1.0, -kI, -1.0, kI};
    coeffs_.clear();
    for (int m = 0;; ++m) {
      const double j = std::cyl_bessel_j(double(m), x);
      coeffs_.push_back((m == 0 ? 1.0 : 2.0) * kPowI[m % 4] * j);
      if (m > x && std::abs(j) < tol) break;
      if (m > 100000) throw AccuracyError("Chebyshev expansion did not converge", dt / 2);
    }
    coeff_x_ = x;
    coeff_tol_ = tol;
  }
  const int terms = int(coeffs_.size());

  prev_ = psi;  // T_0
  acc_ = coeffs_[0] * psi;
  if (terms > 1) {
    next_.setZero();
    k.cheb_step(view, 1.0 / radius, -centre / radius, prev_.data(), next_.data(), cur_.data(),
                coeffs_[1], acc_.data());
    for (int m = 2; m < terms; ++m) {
      k.cheb_step(view, 2.0 / radius, -2.0 * centre / radius, cur_.data(), prev_.data(),
                  next_.data(), coeffs_[m], acc_.data());
      std::swap(prev_, cur_);
      std::swap(cur_, next_);
    }
  }
  psi = std::polar(1.0, -centre * dt) * acc_;
  return terms;
}

}  // namespace dqnd
