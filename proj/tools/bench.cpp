// Benchmark driver: runs a configured suite or reshapes traces for plotting.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "tibpalm/bench/config.hpp"
#include "tibpalm/bench/series.hpp"
#include "tibpalm/bench/suite.hpp"
#include "tibpalm/errors.hpp"

namespace {

using namespace tibpalm;
using namespace tibpalm::bench;

struct SuiteArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> variant;
  std::optional<std::string> out;
  bool override_theory = false;
  bool print_config = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_kind(ProblemKind kind, const SuiteArgs& args) {
  RunConfig cfg = parse_config(read_file(args.config), kind);
  if (args.seed) cfg.seed = *args.seed;
  if (args.variant) cfg.variants = {parse_variant(*args.variant)};
  if (args.out) cfg.out = *args.out;
  if (args.override_theory) cfg.override_theory = true;
  check_admissibility(cfg);
  if (args.print_config) {
    std::cout << emit_config(cfg);
    return 0;
  }
  const SuiteResult result = run_suite(cfg, &std::cerr);
  std::cout << result.converged() << "/" << result.runs.size() << " runs converged; summary "
            << result.summary.string() << "\n";
  return result.all_converged() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inertial alternating minimization benchmarks"};
  app.require_subcommand(1);

  SuiteArgs args;
  const std::pair<const char*, ProblemKind> kinds[] = {
      {"nmf", ProblemKind::Nmf}, {"sigrec", ProblemKind::Sigrec}, {"qfp", ProblemKind::Qfp}};
  std::vector<std::pair<CLI::App*, ProblemKind>> suite_cmds;
  for (const auto& [name, kind] : kinds) {
    auto* cmd = app.add_subcommand(name, std::string("Run the ") + name + " suite");
    cmd->add_option("--config", args.config, "Config file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--seed", args.seed, "Base seed");
    cmd->add_option("--variant", args.variant, "Run a single variant");
    cmd->add_option("--out", args.out, "Output directory");
    cmd->add_flag("--override-theory", args.override_theory,
                  "Run schedules that are not provably admissible");
    cmd->add_flag("--print-config", args.print_config, "Print the resolved config and exit");
    suite_cmds.emplace_back(cmd, kind);
  }

  std::vector<std::string> traces;
  std::string series_out;
  auto* series = app.add_subcommand("series", "Reshape trace CSVs into long format");
  series->add_option("traces", traces, "Trace CSV files")->required()->check(CLI::ExistingFile);
  series->add_option("-o,--output", series_out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& [cmd, kind] : suite_cmds)
      if (cmd->parsed()) return run_kind(kind, args);

    std::vector<TraceInput> inputs;
    for (const auto& t : traces) inputs.push_back({default_series_label(t), t});
    if (series_out.empty()) {
      emit_figure_series(inputs, std::cout);
    } else {
      std::ofstream out(series_out);
      if (!out) throw InputError("cannot write " + series_out);
      emit_figure_series(inputs, out);
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
