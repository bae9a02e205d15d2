// dqnd: scenario runner. See README.md for usage and docs/output_schema.md for the file layout.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "dqnd/errors.hpp"
#include "dqnd/output.hpp"
#include "dqnd/scenarios.hpp"

namespace {

struct RawOptions {
  std::string epsilon, alpha, beta, c1, c2;
  std::optional<double> g, weight_floor;
  std::optional<int> samples;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirac oscillator QND measurement simulator"};
  app.set_version_flag("--version", std::string(dqnd::version_tag()));
  app.set_config("--config", "", "INI file of flag=value lines; command-line flags win");
  app.require_subcommand(1);
  app.fallthrough();

  dqnd::RunConfig cfg;
  RawOptions raw;
  bool no_halving = false;
  app.add_option("--epsilon", raw.epsilon, "hbar omega / mc^2; comma-separated list for fig2, scan, spectrum");
  app.add_option("--alpha", raw.alpha, "oscillator coherent amplitude, e.g. 0.5 or 0.3+0.4i");
  app.add_option("--beta", raw.beta, "probe coherent amplitude");
  app.add_option("--c1", raw.c1, "spin-up amplitude");
  app.add_option("--c2", raw.c2, "spin-down amplitude");
  app.add_option("--g", raw.g, "measurement strength (natural units)");
  app.add_option("--omega-b", cfg.omega_b, "probe boson frequency");
  app.add_option("--omega-s", cfg.omega_s, "probe spin frequency");
  app.add_option("--osc-dim", cfg.osc_dim, "oscillator Fock cutoff, 0 automatic");
  app.add_option("--probe-dim", cfg.probe_dim, "probe photon-number cutoff, 0 automatic");
  app.add_option("--t-max", cfg.t_max, "final time in periods 2 pi / omega");
  app.add_option("--samples", raw.samples, "number of output times");
  app.add_option("--max-step", cfg.max_step, "upper bound on the time step of driven runs");
  app.add_flag("--no-halving", no_halving, "skip the half-step accuracy rerun");
  app.add_option("--weight-floor", raw.weight_floor, "skip probe sectors lighter than this");
  app.add_option("--frame", cfg.frame, "custom: fw or dirac")->check(CLI::IsMember({"fw", "dirac"}));
  app.add_option("--platform", cfg.platform, "scales: electron, cold_atom or custom");
  app.add_option("--mass", cfg.mass_kg, "scales: mass in kg");
  app.add_option("--c-eff", cfg.c_eff, "scales: effective speed of light in m/s");
  app.add_option("--n-excitation", cfg.n_excitation, "scales: oscillator excitation");
  app.add_option("--threads", cfg.threads, "worker cap, 0 uses DIRAC_QND_THREADS or all cores");
  app.add_option("--out", cfg.out, "output path; stdout when omitted");
  app.add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  for (const char* name : {"fig1", "fig2", "scan", "spectrum", "scales", "custom"}) {
    app.add_subcommand(name)->callback([&cfg, name] { cfg.scenario = name; });
  }
  app.get_subcommand("fig1")->description("Figure 1: FW-frame optical QND measurement");
  app.get_subcommand("fig2")->description("Figure 2: weak-regime observable under the full Dirac dynamics");
  app.get_subcommand("scan")->description("4 pi snapshot of the Figure 2 run over an epsilon grid");
  app.get_subcommand("spectrum")->description("analytic and numerical Dirac spectrum with residuals");
  app.get_subcommand("scales")->description("SI order-of-magnitude estimates for physical platforms");
  app.get_subcommand("custom")->description("optical run with every parameter explicit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dqnd::exit_code(dqnd::ErrorKind::Config);
  }

  try {
    if (!raw.epsilon.empty()) cfg.epsilon = dqnd::parse_list(raw.epsilon);
    if (!raw.alpha.empty()) cfg.alpha = dqnd::parse_complex(raw.alpha);
    if (!raw.beta.empty()) cfg.beta = dqnd::parse_complex(raw.beta);
    if (!raw.c1.empty()) cfg.c1 = dqnd::parse_complex(raw.c1);
    if (!raw.c2.empty()) cfg.c2 = dqnd::parse_complex(raw.c2);
    cfg.g = raw.g;
    cfg.samples = raw.samples;
    cfg.weight_floor = raw.weight_floor;
    cfg.halving_check = !no_halving;
    cfg = dqnd::resolve(cfg);
    const dqnd::ScenarioResult res = dqnd::run_scenario(cfg);
    for (const auto& w : res.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    for (const auto& p : dqnd::write_result(cfg, res)) std::fprintf(stderr, "wrote %s\n", p.c_str());
  } catch (const dqnd::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return dqnd::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
