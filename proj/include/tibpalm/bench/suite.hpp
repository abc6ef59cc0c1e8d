#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "tibpalm/bench/config.hpp"
#include "tibpalm/engine.hpp"
#include "tibpalm/problems/nmf.hpp"
#include "tibpalm/problems/qfp.hpp"
#include "tibpalm/problems/sigrec.hpp"

namespace tibpalm::bench {

/// Signal-recovery instance for one repetition seed.
SignalRecoveryProblem make_sigrec(const RunConfig& config, std::uint64_t seed);
/// The NMF instance: the configured data file, or a synthetic one drawn from config.seed.
SparseNmfProblem make_nmf(const RunConfig& config);
/// The QFP instance: the bundled fixed instance, a random one drawn from
/// config.seed, or a matrix file in the same layout.
QfpProblem make_qfp(const RunConfig& config);

/// Kernels a variant runs with. Proximal variants always get Euclidean
/// kernels of scales μ and λ on sigrec.
Geometries sigrec_geometries(const SignalRecoveryProblem& p, const RunConfig& config,
                             Variant variant);
Geometries qfp_geometries(const RunConfig& config, const GeometryPair& pair);
Geometries nmf_geometries();

/// Writes the trace table: a '#' header line, then
/// k,L,H,delta,Ek,inner_x,inner_y,elapsed_ms.
void write_trace_csv(std::ostream& out, const RunTrace& trace, const std::string& header);

struct RunRecord {
  Variant variant = Variant::TiBPALM;
  std::string geometry;  // QFP pair label, empty otherwise
  std::string schedule;
  std::uint64_t seed = 0;
  RunSummary summary;
  long inner_x_total = 0;
  long inner_y_total = 0;
  double final_objective = 0.0;
  std::filesystem::path trace;
};

struct SuiteResult {
  std::vector<RunRecord> runs;
  std::filesystem::path summary;
  long converged() const;
  bool all_converged() const { return converged() == static_cast<long>(runs.size()); }
};

/// Runs every (variant, [geometry pair, schedule], repetition) combination of
/// the config, writing one trace CSV per run under <out>/<kind>/traces and an
/// aggregated <out>/<kind>/summary.csv. Solver faults are recorded per run;
/// configuration errors abort the suite. Progress goes to `log` when given.
SuiteResult run_suite(const RunConfig& config, std::ostream* log = nullptr);

/// Median of a sample (mean of the middle pair for even sizes); NaN if empty.
double median(std::vector<double> values);

}  // namespace tibpalm::bench
