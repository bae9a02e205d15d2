// One PASS/FAIL line per acceptance criterion; exit status 1 if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "dqnd/fw.hpp"
#include "dqnd/measurement.hpp"
#include "dqnd/output.hpp"
#include "dqnd/qnd.hpp"
#include "dqnd/scenarios.hpp"
#include "dqnd/sectors.hpp"
#include "dqnd/spectrum_analysis.hpp"
#include "dqnd/spin_probe.hpp"

using namespace dqnd;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kXzpt = 0.70710678118654752440;

const std::vector<double> kEpsGrid = {1e-3, 0.02, 0.1, 1.0, 10.0, 1e3};

struct Outcome {
  bool pass = true;
  std::string detail;

  template <typename... A>
  void require(bool ok, const char* fmt, A... args) {
    char buf[256];
    if constexpr (sizeof...(A) == 0) {
      std::snprintf(buf, sizeof buf, "%s", fmt);
    } else {
      std::snprintf(buf, sizeof buf, fmt, args...);
    }
    if (!detail.empty()) detail += "; ";
    detail += buf;
    if (!ok) {
      pass = false;
      detail += " [x]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int failures = 0;

double criterion(int id, const char* title, double budget_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, "exception: %s", e.what());
  }
  const double elapsed = seconds_since(t0);
  o.require(elapsed < budget_s, "runtime %.2f s < %.0f s", elapsed, budget_s);
  if (!o.pass) ++failures;
  std::printf("criterion %2d: %s  %s | %s\n", id, o.pass ? "PASS" : "FAIL", title, o.detail.c_str());
  std::fflush(stdout);
  return elapsed;
}

double dev(const Operator& a, const Operator& b, const std::vector<Index>& idx) {
  return interior_max_abs((a - b).matrix(), idx);
}

std::vector<double> grid(double t_max, int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = t_max * i / (n - 1);
  return t;
}

double max_drift(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x - v.front()));
  return m;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Operator dense(const SpaceDescriptor& s, const SparseMatrix& m) { return {s, Matrix(m)}; }

}  // namespace

int main() {
  std::printf("dqnd acceptance suite, version %s\n", version_tag());

  criterion(1, "Dirac spectrum against the analytic levels", 5.0, [](Outcome& o) {
    for (double e : kEpsGrid) {
      const DiracParams p = DiracParams::from_epsilon(e);
      const auto space = make_space(60, true);
      const Eigen::VectorXd ev =
          Eigen::SelfAdjointEigenSolver<Matrix>(build_h_dirac(p, space).matrix(), Eigen::EigenvaluesOnly)
              .eigenvalues();
      double worst = 0.0;
      for (int n = 0; n <= 30; ++n) {
        for (Branch b : {Branch::Plus, Branch::Minus}) {
          const double target = analytic_energy(n, b, p);
          double best = HUGE_VAL;
          for (Index i = 0; i < ev.size(); ++i) best = std::min(best, std::abs(ev[i] - target));
          worst = std::max(worst, best / p.mc2);
        }
      }
      o.require(worst < 1e-9, "eps=%g: %.1e mc2", e, worst);
    }
  });

  criterion(2, "FW unitary, H_F and closed forms", 10.0, [](Outcome& o) {
    double worst_u = 0.0, worst_h = 0.0, worst_a = 0.0, worst_w = 0.0;
    for (double e : kEpsGrid) {
      const DiracParams p = DiracParams::from_epsilon(e);
      const auto space = make_space(40, true);
      const auto idx = interior_indices(space);
      const FwUnitary u = build_fw_unitary(p, space);
      const Operator id = Operator::identity(space);
      worst_u = std::max({worst_u, dev(u.u * u.u.adjoint(), id, idx), dev(u.u.adjoint() * u.u, id, idx)});
      // energies are compared in units of max(1, mc2), as in criterion 1
      worst_h = std::max(worst_h, dev(to_fw(build_h_dirac(p, space), u), fw_hamiltonian(p, space), idx) /
                                      std::max(1.0, p.mc2));
      const auto [ad, add] = closed_form_transformed_ladder(p, space);
      const auto [a, acr] = ladder(space, Boson::Oscillator);
      worst_a = std::max(worst_a, dev(ad, to_dirac(a, u), idx));
      // the n = 0 corner lies outside the interior; it has no real closed form for eps > 1/2
      const Operator conj = to_dirac(frequency_operator_general(p, space).op, u);
      worst_w = std::max(worst_w, dev(closed_form_transformed_frequency(p, space, EdgeConvention{0.0}), conj, idx));
    }
    o.require(worst_u < 1e-9, "UU^dag-1 %.1e", worst_u);
    o.require(worst_h < 1e-9, "UH_DU^dag-H_F %.1e", worst_h);
    o.require(worst_a < 1e-9, "U^dag a U %.1e", worst_a);
    o.require(worst_w < 1e-9, "transformed omega %.1e", worst_w);
  });

  criterion(3, "[X1, X2] = i in three regimes", 10.0, [](Outcome& o) {
    std::mt19937 rng(20240611);
    std::uniform_real_distribution<double> ut(0.0, 4.0 * kPi);
    const auto space = make_space(40, true);
    const auto idx = interior_indices(space);
    const struct {
      Regime r;
      double eps;
      const char* name;
    } cases[] = {{Regime::Weak, 0.01, "nr"}, {Regime::Strong, 100.0, "r"}, {Regime::FwGeneral, 0.1, "F"}};
    for (const auto& c : cases) {
      const DiracParams p = DiracParams::from_epsilon(c.eps);
      double worst = 0.0;
      for (int k = 0; k < 5; ++k) {
        const double t = ut(rng);
        const Operator x1 = quadrature({1, c.r, t, p}, space);
        const Operator x2 = quadrature({2, c.r, t, p}, space);
        worst = std::max(worst, interior_deviation_from_scalar(commutator(x1, x2).matrix(), kI, idx));
      }
      o.require(worst < 1e-9, "%s %.1e", c.name, worst);
    }
  });

  criterion(4, "QND identity i[H, X1] + dX1/dt = 0", 10.0, [](Outcome& o) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ut(0.0, 4.0 * kPi);
    const auto space = make_space(40, true);
    const auto idx = interior_indices(space);  // n >= 2
    const struct {
      Regime r;
      double eps;
      const char* name;
    } cases[] = {{Regime::Weak, 0.01, "nr"}, {Regime::Strong, 100.0, "r"}, {Regime::FwGeneral, 0.1, "F"}};
    for (const auto& c : cases) {
      const DiracParams p = DiracParams::from_epsilon(c.eps);
      const Operator h = c.r == Regime::Weak     ? dense(space, h_nr_sparse(p, space))
                         : c.r == Regime::Strong ? dense(space, h_r_sparse(p, space))
                                                 : fw_hamiltonian(p, space);
      double worst = 0.0;
      for (int k = 0; k < 3; ++k) {
        const double t = ut(rng);
        const Operator x1 = quadrature({1, c.r, t, p}, space);
        const Operator d1 = quadrature({1, c.r, t, p}, space, nullptr, Part::TimeDerivative);
        worst = std::max(worst, interior_max_abs(kI * commutator(h, x1) + d1, idx));
      }
      o.require(worst < 1e-8, "%s %.1e", c.name, worst);
    }
  });

  // Fig 1 run shared by criteria 5 and 6.
  SectorRunResult fig1;
  double fig1_seconds = 0.0;
  fig1_seconds = criterion(5, "Fig 1 flat X1F and linear X2F backaction", 60.0, [&](Outcome& o) {
    OpticalRun run;  // eps 0.1, alpha 0.5, beta 2, g 0.1
    run.t_grid = grid(4.0 * kPi, 2001);
    run.probe_dim = 24;
    fig1 = run_fw_optical(run);
    const auto& x1 = fig1.series.get("X1F");
    const auto& x2 = fig1.series.get("X2F");
    o.require(max_drift(x1.mean) < 1e-6 * kXzpt, "<X1F> drift %.1e x0", max_drift(x1.mean) / kXzpt);
    o.require(max_drift(x1.variance) < 1e-6, "var X1F drift %.1e", max_drift(x1.variance));
    const double slope = polyfit(fig1.series.times, x2.mean, 1)[1];
    o.require(std::abs(slope / -0.4 - 1.0) < 0.01, "X2F slope %.5f (-0.4)", slope);
    const double quad = polyfit(fig1.series.times, x2.variance, 2, 2.0 * kPi)[2];
    o.require(std::abs(quad / 0.04 - 1.0) < 0.05, "var X2F t^2 coeff %.5f (0.04)", quad);
  });

  criterion(6, "Zitterbewegung peak near 2 mc^2 = 20", 1.0, [&](Outcome& o) {
    if (fig1.series.times.empty()) {
      o.require(false, "no Fig 1 run");
      return;
    }
    const Spectrum s = amplitude_spectrum(fig1.series.times, fig1.series.get("x").mean);
    const SpectralPeak peak = dominant_peak(s, 2.0, 1e9);
    o.require(std::abs(peak.omega / 20.0 - 1.0) < 0.1, "peak at %.3f omega, amplitude %.2e", peak.omega,
              peak.amplitude);
  });

  criterion(7, "Fig 2 departure from QND grows with eps", 90.0, [](Outcome& o) {
    RunConfig cfg;
    cfg.scenario = "fig2";  // eps {0.001, 0.02, 0.1}, alpha 1, beta 1, g 1, t in [0, 4 pi]
    const ScenarioResult r = run_fig2(cfg);
    const Table& summary = r.tables.back();
    const auto col = [&](const char* name) {
      return std::find(summary.columns.begin(), summary.columns.end(), name) - summary.columns.begin();
    };
    std::vector<std::pair<double, double>> d, growth;  // (eps, value), x_zpt units
    for (std::size_t i = 0; i < summary.rows.size(); ++i) {
      const auto& row = summary.rows[i];
      const Table& series = r.tables[i];
      const auto v0 = series.rows.front()[std::find(series.columns.begin(), series.columns.end(), "X1nr_var") -
                                          series.columns.begin()];
      d.emplace_back(row[col("epsilon")], row[col("X1nr_deviation")]);
      growth.emplace_back(row[col("epsilon")], row[col("X1nr_var")] - v0);
    }
    std::sort(d.begin(), d.end());
    std::sort(growth.begin(), growth.end());
    bool d_up = true, v_up = true;
    for (std::size_t i = 1; i < d.size(); ++i) {
      d_up = d_up && d[i].second > d[i - 1].second;
      v_up = v_up && growth[i].second > growth[i - 1].second;
    }
    o.require(d_up, "D = %.4g, %.4g, %.4g increasing", d[0].second, d[1].second, d[2].second);
    o.require(v_up, "var growth = %.4g, %.4g, %.4g increasing", growth[0].second, growth[1].second,
              growth[2].second);
    o.require(d[0].second < 1e-3, "D(0.001) = %.3g x0 < 1e-3", d[0].second);
  });

  criterion(8, "perturbative order of the approximate Heisenberg equations", 30.0, [](Outcome& o) {
    const auto space = make_space(40, true);
    // weak system: n <= 7, where 2 n eps stays below 0.3
    const auto low = interior_indices(space, 0, 0.2, false);
    std::vector<double> weak;
    for (double e : {0.005, 0.01, 0.02}) {
      const DiracParams p = DiracParams::from_epsilon(e);
      const Operator hf = fw_hamiltonian(p, space);
      weak.push_back(heisenberg_residual(
          [&](double t) { return quadrature_weak({1, Regime::Weak, t, p}, space); }, [&](double) { return hf; },
          [&](double t) { return weak_perturbative_rhs_x1(p, space, t); }, 0.7, low));
    }
    const double r1 = weak[1] / weak[0], r2 = weak[2] / weak[1];
    o.require(std::abs(r1 / 4.0 - 1.0) < 0.25 && std::abs(r2 / 4.0 - 1.0) < 0.25,
              "weak residual ratios %.3f, %.3f (4)", r1, r2);

    const auto idx = interior_indices(space);  // n >= 2
    const Operator sz = pauli(space, PauliAxis::Z, Spin::Dirac);
    std::vector<double> strong;
    for (double e : {10.0, 100.0, 1000.0}) {
      const DiracParams p = DiracParams::from_epsilon(e);
      const Operator h = dense(space, h_r_sparse(p, space)) + cplx(p.mc2) * sz;
      strong.push_back(heisenberg_residual(
          [&](double t) { return quadrature_strong({1, Regime::Strong, t, p}, space); }, [&](double) { return h; },
          [&](double t) { return strong_perturbative_rhs_x1(p, space, t); }, 0.7, idx));
    }
    o.require(strong[1] < strong[0] && strong[2] < strong[1], "strong residuals %.2e, %.2e, %.2e decreasing",
              strong[0], strong[1], strong[2]);
  });

  criterion(9, "effective spin-probe coupling", 120.0, [](Outcome& o) {
    SpinProbeRun run;  // eps 100, <n> = 50, g 0.01, t 2, omega_s = 1e-3 <|omega_r|>
    std::vector<double> f;
    for (double g : {0.01, 0.1, 1.0}) {
      run.g = g;
      f.push_back(effective_vm_check(run).fidelity);
    }
    o.require(f[0] > 0.99, "fidelity %.5f > 0.99", f[0]);
    o.require(f[1] < f[0] && f[2] < f[1], "g x10, x100: %.5f, %.5f decreasing", f[1], f[2]);
  });

  criterion(10, "SI scale estimates", 1.0, [](Outcome& o) {
    const ScaleEstimate e = scale_estimate("electron");
    const ScaleEstimate a = scale_estimate("cold_atom");
    o.require(std::abs(std::log10(e.omega_hz / 1e23)) < 1.0, "electron omega %.2e", e.omega_hz);
    o.require(std::abs(std::log10(a.delta_x1_m / 1e-7)) < 1.0, "cold atom dX1 %.2e m", a.delta_x1_m);
  });

  criterion(11, "fig1 output is byte-identical across runs", 2.0 * std::max(fig1_seconds, 1.0), [](Outcome& o) {
    const auto dir = std::filesystem::temp_directory_path() / "dqnd_acceptance";
    std::filesystem::create_directories(dir);
    std::string text[2];
    for (int i = 0; i < 2; ++i) {
      RunConfig cfg;
      cfg.scenario = "fig1";
      cfg.probe_dim = 24;
      cfg.samples = 401;
      cfg.out = (dir / ("fig1_" + std::to_string(i) + ".csv")).string();
      cfg = resolve(cfg);
      write_result(cfg, run_fig1(cfg));
      text[i] = slurp(cfg.out);
    }
    o.require(!text[0].empty() && text[0] == text[1], "%zu bytes, identical=%s", text[0].size(),
              text[0] == text[1] ? "yes" : "no");
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
