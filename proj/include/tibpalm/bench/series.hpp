#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace tibpalm::bench {

struct TraceInput {
  std::string algorithm;  // series label
  std::filesystem::path path;
};

/// Reshapes trace CSVs into the long format algorithm,k,metric,value with
/// metrics objective, H, E_k and delta (columns L, H, Ek, delta). The
/// starting-point row k = 0 is skipped, so a run contributes 4 rows per
/// iteration. Throws ParseError when a metric column is missing or a value
/// does not parse.
void emit_figure_series(const std::vector<TraceInput>& traces, std::ostream& out);

/// Label for a trace file: its stem, e.g. "tibpalm_seed3".
std::string default_series_label(const std::filesystem::path& path);

}  // namespace tibpalm::bench
