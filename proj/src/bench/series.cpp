#include "tibpalm/bench/series.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <ostream>
#include <sstream>

#include "tibpalm/errors.hpp"

namespace tibpalm::bench {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    cells.push_back(cell);
  }
  return cells;
}

struct Metric {
  const char* name;
  const char* column;
};

constexpr std::array<Metric, 4> kMetrics = {{
    {"objective", "L"},
    {"H", "H"},
    {"E_k", "Ek"},
    {"delta", "delta"},
}};

}  // namespace

std::string default_series_label(const std::filesystem::path& path) {
  return path.stem().string();
}

void emit_figure_series(const std::vector<TraceInput>& traces, std::ostream& out) {
  out << "algorithm,k,metric,value\n";
  for (const auto& t : traces) {
    std::ifstream in(t.path);
    if (!in) throw InputError("cannot read trace " + t.path.string());
    std::string line;
    long line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line[0] == '#') continue;
      header = split_csv(line);
      break;
    }
    if (header.empty()) throw ParseError(t.path.string() + ": missing header", line_no, 1);

    auto column = [&](const std::string& name) -> std::size_t {
      const auto it = std::find(header.begin(), header.end(), name);
      if (it == header.end())
        throw ParseError(t.path.string() + ": missing column '" + name + "'", line_no, 1);
      return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t k_col = column("k");
    std::array<std::size_t, kMetrics.size()> cols{};
    for (std::size_t i = 0; i < kMetrics.size(); ++i) cols[i] = column(kMetrics[i].column);

    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line[0] == '#') continue;
      const auto cells = split_csv(line);
      if (cells.size() != header.size())
        throw ParseError(t.path.string() + ": expected " + std::to_string(header.size()) +
                             " cells",
                         line_no, 1);
      if (cells[k_col] == "0") continue;
      for (std::size_t i = 0; i < kMetrics.size(); ++i)
        out << t.algorithm << "," << cells[k_col] << "," << kMetrics[i].name << ","
            << cells[cols[i]] << "\n";
    }
  }
}

}  // namespace tibpalm::bench
