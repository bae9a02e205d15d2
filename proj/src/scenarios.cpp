#include "dqnd/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "dqnd/dirac_model.hpp"
#include "dqnd/errors.hpp"
#include "dqnd/fw.hpp"
#include "dqnd/measurement.hpp"

namespace dqnd {

namespace {

constexpr double kXzpt = 0.70710678118654752440;
constexpr double kHbar = 1.054571817e-34;
constexpr double kElectronVolt = 1.602176634e-19;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

OpticalRun optical_run(const RunConfig& cfg, double epsilon) {
  OpticalRun run;
  run.epsilon = epsilon;
  run.alpha = *cfg.alpha;
  run.c1 = cfg.c1;
  run.c2 = cfg.c2;
  run.beta = *cfg.beta;
  run.g = *cfg.g;
  run.t_grid = time_grid(cfg.t_max, *cfg.samples);
  run.probe_dim = cfg.probe_dim;
  run.osc_dim = cfg.osc_dim;
  run.max_step = cfg.max_step;
  run.halving_check = cfg.halving_check;
  run.weight_floor = *cfg.weight_floor;
  run.threads = cfg.threads;
  return run;
}

// Means in x_zpt (p_zpt) units, variances in their squares.
Table series_table(const SectorRunResult& r, const std::string& name) {
  Table t;
  t.name = name;
  t.columns.push_back("t");
  for (const auto& o : r.series.observables) {
    t.columns.push_back(o.name + "_mean");
    t.columns.push_back(o.name + "_var");
  }
  t.columns.push_back("leakage");
  for (std::size_t i = 0; i < r.series.times.size(); ++i) {
    std::vector<double> row{r.series.times[i]};
    for (const auto& o : r.series.observables) {
      row.push_back(o.mean[i] / kXzpt);
      row.push_back(o.variance[i] / (kXzpt * kXzpt));
    }
    row.push_back(r.series.leakage[i]);
    t.rows.push_back(std::move(row));
  }
  t.meta = {{"probe_dim_used", std::to_string(r.sectors.size())},
            {"probe_tail", num(r.probe_tail)},
            {"max_step_used", num(r.step)},
            {"halving_distance", num(r.halving_distance)},
            {"max_norm_drift", num(r.series.max_norm_drift)}};
  int max_osc = 0;
  for (const auto& s : r.sectors) max_osc = std::max(max_osc, s.osc_dim);
  t.meta.emplace_back("osc_dim_used", std::to_string(max_osc));
  return t;
}

void absorb(ScenarioResult& out, const SectorRunResult& r) {
  out.max_leakage = std::max(out.max_leakage, r.series.max_leakage());
  out.probe_tail = std::max(out.probe_tail, r.probe_tail);
}

std::vector<double> snapshot_row(double epsilon, const SectorRunResult& r) {
  const TimeSeries& s = r.series;
  const ObservableTrace& x1 = s.get("X1nr");
  const ObservableTrace& x2 = s.get("X2nr");
  double dev = 0.0;
  for (double m : x1.mean) dev = std::max(dev, std::abs(m - x1.mean.front()));
  const double v = kXzpt * kXzpt;
  return {epsilon, s.times.back(), x1.mean.back() / kXzpt, x1.variance.back() / v,
          x2.mean.back() / kXzpt, x2.variance.back() / v, dev / kXzpt};
}

const std::vector<std::string> kSnapshotColumns = {
    "epsilon", "t_end", "X1nr_mean", "X1nr_var", "X2nr_mean", "X2nr_var", "X1nr_deviation"};

std::string eps_suffix(double e) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "eps%g", e);
  return buf;
}

void require_single_epsilon(const RunConfig& cfg) {
  if (cfg.epsilon.size() != 1) throw ConfigError(cfg.scenario + " takes exactly one epsilon");
}

}  // namespace

std::vector<double> time_grid(double t_max_periods, int samples) {
  if (!(t_max_periods > 0.0) || !std::isfinite(t_max_periods)) throw ConfigError("t_max must be positive");
  if (samples < 2) throw ConfigError("samples must be >= 2");
  const double span = t_max_periods * 2.0 * std::numbers::pi;
  std::vector<double> t(samples);
  for (int i = 0; i < samples; ++i) t[i] = span * i / (samples - 1);
  return t;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi >= lo) || points < 1) throw ConfigError("log grid needs 0 < lo <= hi");
  if (points == 1) return {lo};
  std::vector<double> g(points);
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < points; ++i) g[i] = std::exp(a + (b - a) * i / (points - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

ScaleEstimate scale_estimate(const std::string& platform, double mass_kg, double c_eff,
                             double epsilon, double n_excitation) {
  ScaleEstimate s{platform, mass_kg, c_eff, epsilon, n_excitation, 0, 0, 0, 0};
  if (platform == "electron") {
    if (s.mass_kg == 0.0) s.mass_kg = 9.1093837015e-31;
    if (s.c_eff_m_per_s == 0.0) s.c_eff_m_per_s = 2.99792458e8;
  } else if (platform == "cold_atom") {
    if (s.mass_kg == 0.0) s.mass_kg = 1e-27;
    if (s.c_eff_m_per_s == 0.0) s.c_eff_m_per_s = 1e-2;
  } else if (platform != "custom") {
    throw ConfigError("unknown platform '" + platform + "'");
  }
  if (platform != "custom") {
    if (s.epsilon == 0.0) s.epsilon = 1e3;
    if (s.n_excitation == 0.0) s.n_excitation = 1e4;
  }
  for (double v : {s.mass_kg, s.c_eff_m_per_s, s.epsilon, s.n_excitation}) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("scale inputs must be finite and positive");
  }
  const double mc2 = s.mass_kg * s.c_eff_m_per_s * s.c_eff_m_per_s;
  s.omega_hz = s.epsilon * mc2 / kHbar;
  s.delta_x1_m = std::sqrt(kHbar / (2.0 * s.mass_kg * s.omega_hz));
  s.delta_x_m = s.delta_x1_m * std::sqrt(2.0 * s.n_excitation + 1.0);
  s.energy_ev = mc2 * std::sqrt(2.0 * s.n_excitation * s.epsilon) / kElectronVolt;
  return s;
}

ScenarioResult run_fig1(const RunConfig& raw) {
  const RunConfig cfg = resolve(raw);
  require_single_epsilon(cfg);
  const OpticalRun run = optical_run(cfg, cfg.epsilon.front());
  const SectorRunResult r = run_fw_optical(run);
  ScenarioResult out;
  absorb(out, r);
  Table t = series_table(r, "");
  MeasurementSetup setup;
  setup.g = run.g;
  setup.alpha = run.alpha;
  setup.beta = run.beta;
  setup.c1 = run.c1;
  setup.c2 = run.c2;
  const BackactionPrediction pred = predict_backaction(setup, DiracParams::from_epsilon(run.epsilon));
  t.meta.emplace_back("predicted_X2F_slope", num(pred.x2_mean_slope / kXzpt));
  t.meta.emplace_back("predicted_X2F_var_quadratic", num(pred.x2_var_quadratic_coeff / (kXzpt * kXzpt)));
  out.tables.push_back(std::move(t));
  return out;
}

ScenarioResult run_fig2(const RunConfig& raw) {
  const RunConfig cfg = resolve(raw);
  ScenarioResult out;
  Table summary;
  summary.name = "summary";
  summary.columns = kSnapshotColumns;
  for (double e : cfg.epsilon) {
    const SectorRunResult r = run_dirac_weak_optical(optical_run(cfg, e));
    absorb(out, r);
    Table t = series_table(r, eps_suffix(e));
    t.meta.insert(t.meta.begin(), {"table_epsilon", num(e)});
    out.tables.push_back(std::move(t));
    summary.rows.push_back(snapshot_row(e, r));
  }
  out.tables.push_back(std::move(summary));
  return out;
}

ScenarioResult run_scan_epsilon(const RunConfig& raw) {
  const RunConfig cfg = resolve(raw);
  ScenarioResult out;
  Table t;
  t.columns = kSnapshotColumns;
  for (double e : cfg.epsilon) {
    const SectorRunResult r = run_dirac_weak_optical(optical_run(cfg, e));
    absorb(out, r);
    t.rows.push_back(snapshot_row(e, r));
  }
  out.tables.push_back(std::move(t));
  return out;
}

ScenarioResult run_spectrum(const RunConfig& raw) {
  const RunConfig cfg = resolve(raw);
  ScenarioResult out;
  Table t;
  t.columns = {"epsilon", "n", "E_plus", "E_minus", "omega_plus", "omega_minus",
               "residual_plus", "residual_minus"};
  for (double e : cfg.epsilon) {
    const DiracParams p = DiracParams::from_epsilon(e);
    const SpaceDescriptor space = make_space(cfg.osc_dim, true);
    const Matrix h = Matrix(build_h_dirac_sparse(p, space));
    const Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = es.eigenvalues();
    auto residual = [&](double target) {
      double best = HUGE_VAL;
      for (Index i = 0; i < ev.size(); ++i) best = std::min(best, std::abs(ev[i] - target));
      return best / p.mc2;
    };
    for (int n = 0; n <= cfg.osc_dim / 2; ++n) {
      const double ep = analytic_energy(n, Branch::Plus, p);
      const double em = analytic_energy(n, Branch::Minus, p);
      t.rows.push_back({e, double(n), ep, em, fw_frequency(n, 0, e), fw_frequency(n, 1, e),
                        residual(ep), residual(em)});
    }
  }
  out.tables.push_back(std::move(t));
  return out;
}

ScenarioResult run_scales(const RunConfig& raw) {
  const RunConfig cfg = resolve(raw);
  const ScaleEstimate s = scale_estimate(cfg.platform, cfg.mass_kg, cfg.c_eff,
                                         cfg.epsilon.empty() ? 0.0 : cfg.epsilon.front(),
                                         cfg.n_excitation);
  ScenarioResult out;
  Table t;
  t.meta = {{"table_platform", s.platform}};
  t.columns = {"mass_kg", "c_eff_m_per_s", "epsilon", "n_excitation", "omega_hz",
               "delta_x1_m", "delta_x_m", "energy_ev"};
  t.rows.push_back({s.mass_kg, s.c_eff_m_per_s, s.epsilon, s.n_excitation, s.omega_hz,
                    s.delta_x1_m, s.delta_x_m, s.energy_ev});
  out.tables.push_back(std::move(t));
  return out;
}

ScenarioResult run_custom(const RunConfig& raw) {
  const RunConfig cfg = resolve(raw);
  require_single_epsilon(cfg);
  const OpticalRun run = optical_run(cfg, cfg.epsilon.front());
  const SectorRunResult r = cfg.frame == "fw" ? run_fw_optical(run) : run_dirac_weak_optical(run);
  ScenarioResult out;
  absorb(out, r);
  out.tables.push_back(series_table(r, ""));
  return out;
}

ScenarioResult run_scenario(const RunConfig& raw) {
  const RunConfig cfg = resolve(raw);
  if (cfg.scenario == "fig1") return run_fig1(cfg);
  if (cfg.scenario == "fig2") return run_fig2(cfg);
  if (cfg.scenario == "scan") return run_scan_epsilon(cfg);
  if (cfg.scenario == "spectrum") return run_spectrum(cfg);
  if (cfg.scenario == "scales") return run_scales(cfg);
  return run_custom(cfg);
}

}  // namespace dqnd
