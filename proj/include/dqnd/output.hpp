#pragma once

// CSV and JSON serialization of scenario results. The layout is described in docs/output_schema.md.

#include <string>
#include <vector>

#include "dqnd/scenarios.hpp"

namespace dqnd {

const char* version_tag();

/// Header lines shared by every table of a run: version, resolved config, leakage maxima.
std::vector<std::pair<std::string, std::string>> run_header(const RunConfig& cfg,
                                                            const ScenarioResult& res);

std::string to_csv(const std::vector<std::pair<std::string, std::string>>& header, const Table& table);
std::string to_json(const std::vector<std::pair<std::string, std::string>>& header,
                    const ScenarioResult& res);

/// Writes the run to cfg.out (stdout when empty). CSV writes one file per table, the named ones
/// as <stem>_<name><ext>; JSON writes a single document. Returns the paths written.
std::vector<std::string> write_result(const RunConfig& cfg, const ScenarioResult& res);

}  // namespace dqnd
