#include "dqnd/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "dqnd/errors.hpp"

namespace dqnd {

namespace {

using Header = std::vector<std::pair<std::string, std::string>>;

std::string cell(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15e", v);
  return buf;
}

std::string derived_path(const std::string& base, const std::string& name, const std::string& ext) {
  std::string stem = base;
  const std::size_t slash = base.find_last_of('/');
  const std::size_t dot = base.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) stem = base.substr(0, dot);
  return name.empty() ? stem + ext : stem + "_" + name + ext;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot open output file '" + path + "'");
  f << text;
  if (!f) throw ConfigError("failed writing '" + path + "'");
}

}  // namespace

const char* version_tag() { return DQND_VERSION_TAG; }

Header run_header(const RunConfig& cfg, const ScenarioResult& res) {
  Header h{{"dqnd_version", version_tag()}};
  for (auto& kv : describe(cfg)) h.push_back(std::move(kv));
  h.emplace_back("max_leakage", cell(res.max_leakage));
  h.emplace_back("max_probe_tail", cell(res.probe_tail));
  for (const auto& w : res.warnings) h.emplace_back("warning", w);
  return h;
}

std::string to_csv(const Header& header, const Table& table) {
  std::string out;
  for (const auto& [k, v] : header) out += "# " + k + "=" + v + "\n";
  out += "# table=" + (table.name.empty() ? std::string("main") : table.name) + "\n";
  for (const auto& [k, v] : table.meta) out += "# " + k + "=" + v + "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) out += (c ? "," : "") + table.columns[c];
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + cell(row[c]);
    out += "\n";
  }
  return out;
}

std::string to_json(const Header& header, const ScenarioResult& res) {
  using nlohmann::ordered_json;
  ordered_json doc;
  ordered_json h = ordered_json::object();
  for (const auto& [k, v] : header) {
    if (k == "warning") {
      h["warnings"].push_back(v);
    } else {
      h[k] = v;
    }
  }
  doc["header"] = h;
  doc["tables"] = ordered_json::array();
  for (const auto& t : res.tables) {
    ordered_json jt;
    jt["table"] = t.name.empty() ? "main" : t.name;
    ordered_json meta = ordered_json::object();
    for (const auto& [k, v] : t.meta) meta[k] = v;
    jt["meta"] = meta;
    jt["columns"] = t.columns;
    ordered_json rows = ordered_json::array();
    for (const auto& r : t.rows) {
      ordered_json jr = ordered_json::array();
      for (double v : r) jr.push_back(std::isfinite(v) ? ordered_json(v) : ordered_json(cell(v)));
      rows.push_back(std::move(jr));
    }
    jt["rows"] = std::move(rows);
    doc["tables"].push_back(std::move(jt));
  }
  return doc.dump(1) + "\n";
}

std::vector<std::string> write_result(const RunConfig& cfg, const ScenarioResult& res) {
  const Header header = run_header(cfg, res);
  std::vector<std::string> paths;
  if (cfg.format == "json") {
    const std::string text = to_json(header, res);
    if (cfg.out.empty()) {
      std::cout << text;
    } else {
      write_file(cfg.out, text);
      paths.push_back(cfg.out);
    }
    return paths;
  }
  for (std::size_t i = 0; i < res.tables.size(); ++i) {
    const Table& t = res.tables[i];
    const std::string text = to_csv(header, t);
    if (cfg.out.empty()) {
      std::cout << (i ? "\n" : "") << text;
      continue;
    }
    const std::size_t dot = cfg.out.find_last_of('.');
    const std::size_t slash = cfg.out.find_last_of('/');
    const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
    const std::string ext = has_ext ? cfg.out.substr(dot) : ".csv";
    const std::string path = t.name.empty() ? cfg.out : derived_path(cfg.out, t.name, ext);
    write_file(path, text);
    paths.push_back(path);
  }
  return paths;
}

}  // namespace dqnd
