#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <regex>

#include "dqnd/errors.hpp"
#include "dqnd/scenarios.hpp"

namespace dqnd {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw ConfigError(std::string(name) + " must be finite");
}

void require_finite(std::complex<double> v, const char* name) {
  require_finite(v.real(), name);
  require_finite(v.imag(), name);
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
  return s;
}

}  // namespace

std::complex<double> parse_complex(const std::string& text) {
  static const std::regex real_re(R"(\s*([-+]?[0-9.]+(?:[eE][-+]?[0-9]+)?)\s*)");
  static const std::regex imag_re(R"(\s*([-+]?[0-9.]*(?:[eE][-+]?[0-9]+)?)\s*[ij]\s*)");
  static const std::regex both_re(
      R"(\s*([-+]?[0-9.]+(?:[eE][-+]?[0-9]+)?)\s*([-+]\s*[0-9.]*(?:[eE][-+]?[0-9]+)?)\s*[ij]\s*)");
  static const std::regex pair_re(
      R"(\s*\(\s*([-+]?[0-9.]+(?:[eE][-+]?[0-9]+)?)\s*,\s*([-+]?[0-9.]+(?:[eE][-+]?[0-9]+)?)\s*\)\s*)");
  auto to_d = [&](std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(), ::isspace), s.end());
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (*end != '\0') throw ConfigError("malformed number '" + text + "'");
    return v;
  };
  std::smatch m;
  std::complex<double> z;
  if (std::regex_match(text, m, real_re)) {
    z = {to_d(m[1]), 0.0};
  } else if (std::regex_match(text, m, imag_re)) {
    z = {0.0, to_d(m[1])};
  } else if (std::regex_match(text, m, both_re)) {
    z = {to_d(m[1]), to_d(m[2])};
  } else if (std::regex_match(text, m, pair_re)) {
    z = {to_d(m[1]), to_d(m[2])};
  } else {
    throw ConfigError("malformed complex number '" + text + "'");
  }
  require_finite(z, "complex value");
  return z;
}

std::string format_complex(std::complex<double> z) {
  if (z.imag() == 0.0) return num(z.real());
  return num(z.real()) + (std::signbit(z.imag()) ? "-" : "+") + num(std::abs(z.imag())) + "i";
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end == item.c_str()) throw ConfigError("malformed list '" + text + "'");
    while (*end == ' ') ++end;
    if (*end != '\0') throw ConfigError("malformed list '" + text + "'");
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

RunConfig resolve(RunConfig cfg) {
  if (cfg.scenario == "scan_epsilon") cfg.scenario = "scan";
  const std::string& s = cfg.scenario;
  if (s != "fig1" && s != "fig2" && s != "scan" && s != "spectrum" && s != "scales" && s != "custom") {
    throw ConfigError("unknown scenario '" + s + "'");
  }
  if (cfg.format != "csv" && cfg.format != "json") throw ConfigError("format must be csv or json");
  if (cfg.frame != "fw" && cfg.frame != "dirac") throw ConfigError("frame must be fw or dirac");

  const bool weak_defaults = s == "fig2" || s == "scan";
  if (cfg.epsilon.empty()) {
    if (s == "fig2") cfg.epsilon = {0.001, 0.02, 0.1};
    else if (s == "scan") cfg.epsilon = log_grid(1e-3, 0.2, 25);
    else if (s == "spectrum") cfg.epsilon = {1e-3, 0.02, 0.1, 1.0, 10.0, 1e3};
    else if (s != "scales") cfg.epsilon = {0.1};
  }
  if (!cfg.alpha) cfg.alpha = weak_defaults ? 1.0 : 0.5;
  if (!cfg.beta) cfg.beta = weak_defaults ? 1.0 : 2.0;
  if (!cfg.g) cfg.g = weak_defaults ? 1.0 : 0.1;
  if (!cfg.samples) cfg.samples = s == "fig1" ? 2001 : s == "scan" ? 21 : 201;
  if (!cfg.weight_floor) cfg.weight_floor = weak_defaults ? 1e-4 : 1e-12;
  if (s == "spectrum" && cfg.osc_dim == 0) cfg.osc_dim = 60;

  for (double e : cfg.epsilon) {
    if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("epsilon must be finite and positive");
  }
  require_finite(*cfg.alpha, "alpha");
  require_finite(*cfg.beta, "beta");
  require_finite(cfg.c1, "c1");
  require_finite(cfg.c2, "c2");
  if (std::abs(std::norm(cfg.c1) + std::norm(cfg.c2) - 1.0) > 1e-9) {
    throw ConfigError("spin amplitudes must satisfy |c1|^2 + |c2|^2 = 1");
  }
  if (!(*cfg.g >= 0.0) || !std::isfinite(*cfg.g)) throw ConfigError("g must be finite and >= 0");
  require_finite(cfg.omega_b, "omega_b");
  require_finite(cfg.omega_s, "omega_s");
  if (!(cfg.t_max > 0.0) || !std::isfinite(cfg.t_max)) throw ConfigError("t_max must be positive");
  if (*cfg.samples < 2) throw ConfigError("samples must be >= 2");
  if (!(cfg.max_step > 0.0) || !std::isfinite(cfg.max_step)) throw ConfigError("max_step must be positive");
  if (!(*cfg.weight_floor >= 0.0) || *cfg.weight_floor >= 1.0) {
    throw ConfigError("weight_floor must lie in [0, 1)");
  }
  if (cfg.osc_dim < 0 || (cfg.osc_dim > 0 && cfg.osc_dim < 8)) throw ConfigError("osc_dim must be 0 or >= 8");
  if (cfg.probe_dim < 0 || cfg.probe_dim == 1) throw ConfigError("probe_dim must be 0 or >= 2");
  if (cfg.threads < 0) throw ConfigError("threads must be >= 0");
  if (s == "scales") {
    if (cfg.platform != "electron" && cfg.platform != "cold_atom" && cfg.platform != "custom") {
      throw ConfigError("platform must be electron, cold_atom or custom");
    }
    if (cfg.epsilon.size() > 1) throw ConfigError("scales takes at most one epsilon");
    for (double v : {cfg.mass_kg, cfg.c_eff, cfg.n_excitation}) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("scale inputs must be finite and positive");
    }
    if (cfg.platform == "custom" &&
        (cfg.mass_kg == 0.0 || cfg.c_eff == 0.0 || cfg.epsilon.empty() || cfg.n_excitation == 0.0)) {
      throw ConfigError("custom platform needs mass, c-eff, epsilon and n-excitation");
    }
  }
  return cfg;
}

std::vector<std::pair<std::string, std::string>> describe(const RunConfig& raw) {
  const RunConfig c = resolve(raw);
  std::vector<std::pair<std::string, std::string>> d{
      {"scenario", c.scenario},
      {"epsilon", join(c.epsilon)},
      {"alpha", format_complex(*c.alpha)},
      {"c1", format_complex(c.c1)},
      {"c2", format_complex(c.c2)},
      {"beta", format_complex(*c.beta)},
      {"g", num(*c.g)},
      {"omega_b", num(c.omega_b)},
      {"omega_s", num(c.omega_s)},
      {"osc_dim", std::to_string(c.osc_dim)},
      {"probe_dim", std::to_string(c.probe_dim)},
      {"t_max", num(c.t_max)},
      {"samples", std::to_string(*c.samples)},
      {"max_step", num(c.max_step)},
      {"halving_check", c.halving_check ? "true" : "false"},
      {"weight_floor", num(*c.weight_floor)},
      {"frame", c.frame},
      {"platform", c.platform},
      {"mass_kg", num(c.mass_kg)},
      {"c_eff", num(c.c_eff)},
      {"n_excitation", num(c.n_excitation)},
      {"format", c.format},
  };
  return d;
}

}  // namespace dqnd
