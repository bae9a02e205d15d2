#pragma once

// Named experiments behind the CLI. Each returns tables ready for output; times are in units
// of 1/omega, quadrature means in x_zpt and variances in x_zpt^2.

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dqnd/sectors.hpp"

namespace dqnd {

struct Table {
  std::string name;                                   // file suffix; empty for the main table
  std::vector<std::pair<std::string, std::string>> meta;  // extra header lines
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct RunConfig {
  std::string scenario = "fig1";  // fig1 | fig2 | scan | spectrum | scales | custom
  std::vector<double> epsilon;    // empty: scenario default
  std::optional<std::complex<double>> alpha;
  std::complex<double> c1 = 0.70710678118654752440;
  std::complex<double> c2 = 0.70710678118654752440;
  std::optional<std::complex<double>> beta;
  std::optional<double> g;
  double omega_b = 1.0;
  double omega_s = 0.0;
  int osc_dim = 0;    // 0: automatic
  int probe_dim = 0;  // 0: automatic
  double t_max = 2.0;  // units of 2 pi / omega
  std::optional<int> samples;
  double max_step = 0.02;
  bool halving_check = true;
  std::optional<double> weight_floor;
  std::string frame = "fw";           // custom: fw | dirac
  std::string platform = "electron";  // scales: electron | cold_atom | custom
  double mass_kg = 0.0;
  double c_eff = 0.0;
  double n_excitation = 0.0;
  int threads = 0;
  std::string out;
  std::string format = "csv";
};

/// Fills unset fields with the scenario defaults. ConfigError on an unknown
/// scenario, frame, platform or format, or on non-finite / out-of-range values.
RunConfig resolve(RunConfig cfg);

/// Ordered key=value description of a resolved config.
std::vector<std::pair<std::string, std::string>> describe(const RunConfig& cfg);

struct ScenarioResult {
  std::vector<Table> tables;
  double max_leakage = 0.0;
  double probe_tail = 0.0;
  std::vector<std::string> warnings;
};

ScenarioResult run_fig1(const RunConfig& cfg);
ScenarioResult run_fig2(const RunConfig& cfg);
ScenarioResult run_scan_epsilon(const RunConfig& cfg);
ScenarioResult run_spectrum(const RunConfig& cfg);
ScenarioResult run_scales(const RunConfig& cfg);
ScenarioResult run_custom(const RunConfig& cfg);
/// Dispatch on cfg.scenario (resolving first).
ScenarioResult run_scenario(const RunConfig& cfg);

struct ScaleEstimate {
  std::string platform;
  double mass_kg;
  double c_eff_m_per_s;
  double epsilon;
  double n_excitation;
  double omega_hz;
  double delta_x1_m;  // sqrt(hbar / 2 m omega): width of the QND quadrature
  double delta_x_m;   // sqrt(hbar / 2 m omega) sqrt(2 n + 1): position spread at excitation n
  double energy_ev;   // m c^2 sqrt(2 n eps)
};

/// Presets "electron" (9.109e-31 kg, c) and "cold_atom" (1e-27 kg, 1e-2 m/s), both at
/// eps = 1e3, n = 1e4. DomainError on non-positive inputs.
ScaleEstimate scale_estimate(const std::string& platform, double mass_kg = 0.0, double c_eff = 0.0,
                             double epsilon = 0.0, double n_excitation = 0.0);

/// "0.5", "-1.5e-2", "0.3+0.4i", "2i" or "(0.3,0.4)". ConfigError otherwise.
std::complex<double> parse_complex(const std::string& text);
std::string format_complex(std::complex<double> z);
/// Comma-separated reals. ConfigError on an empty or malformed entry.
std::vector<double> parse_list(const std::string& text);

/// Uniform grid of `samples` points over [0, t_max * 2 pi].
std::vector<double> time_grid(double t_max_periods, int samples);

/// Log-spaced grid from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int points);

}  // namespace dqnd
