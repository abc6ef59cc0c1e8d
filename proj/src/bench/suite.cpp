#include "tibpalm/bench/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <numeric>
#include <ostream>

#include "tibpalm/errors.hpp"
#include "tibpalm/matrix_io.hpp"

namespace tibpalm::bench {

namespace {

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string num(double v) { return std::isnan(v) ? "nan" : format_double(v); }

double mean(const std::vector<double>& v) {
  if (v.empty()) return std::nan("");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

struct Job {
  Variant variant;
  std::string geometry;
  ScheduleSpec spec;
};

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

class SuiteRunner {
 public:
  SuiteRunner(const RunConfig& config, std::ostream* log)
      : cfg_(config), log_(log), dir_(std::filesystem::path(config.out) / problem_kind_name(config.kind)) {
    std::filesystem::create_directories(dir_ / "traces");
  }

  RunRecord execute(const CoupledProblem& problem, const Geometries& geoms, const Job& job,
                    std::uint64_t seed, const BlockPoint& start, double rho) {
    RunOptions opts;
    opts.variant = job.variant;
    opts.stop = {cfg_.tol, cfg_.max_iter};
    opts.override_theory = cfg_.override_theory;
    opts.record_time = cfg_.timing;
    const InertialSchedule sched = realize(job.spec, rho);
    const RunTrace trace = run(problem, geoms, sched, opts, start);

    RunRecord rec;
    rec.variant = job.variant;
    rec.geometry = job.geometry;
    rec.schedule = job.spec.name;
    rec.seed = seed;
    rec.summary = trace.summary;
    for (const auto& r : trace.records) {
      if (r.k == 0) continue;
      rec.inner_x_total += r.inner_x;
      rec.inner_y_total += r.inner_y;
    }
    rec.final_objective = trace.records.back().objective;

    std::string stem(variant_name(job.variant));
    if (!job.geometry.empty()) stem += "_" + job.geometry;
    if (cfg_.kind == ProblemKind::Qfp) stem += "_" + job.spec.name;
    stem += "_seed" + std::to_string(seed);
    rec.trace = dir_ / "traces" / (stem + ".csv");
    auto out = open_out(rec.trace);
    write_trace_csv(out, trace,
                    std::string(problem_kind_name(cfg_.kind)) + " " +
                        std::string(variant_name(job.variant)) + " seed " + std::to_string(seed) +
                        " written " + timestamp());

    if (log_) {
      *log_ << stem << ": " << termination_name(trace.summary.reason) << " after "
            << trace.summary.iterations << " iterations";
      if (!trace.summary.message.empty()) *log_ << " (" << trace.summary.message << ")";
      *log_ << "\n";
    }
    return rec;
  }

  std::filesystem::path write_summary(const std::vector<Job>& jobs,
                                      const std::vector<RunRecord>& runs) {
    const auto path = dir_ / "summary.csv";
    auto out = open_out(path);
    switch (cfg_.kind) {
      case ProblemKind::Sigrec:
        out << "algorithm,runs,converged,faults,theory_supported,median_iter,mean_iter,"
               "mean_time_s,mean_xy_gap,max_xy_gap\n";
        break;
      case ProblemKind::Qfp:
        out << "algorithm,geometry,schedule,runs,converged,faults,theory_supported,median_iter,"
               "mean_iter,mean_inner_x,mean_inner_y,mean_time_s\n";
        break;
      case ProblemKind::Nmf:
        out << "algorithm,runs,converged,faults,theory_supported,median_iter,mean_iter,"
               "mean_final_objective,mean_time_s,trace\n";
        break;
    }
    for (const auto& job : jobs) {
      std::vector<const RunRecord*> group;
      for (const auto& r : runs)
        if (r.variant == job.variant && r.geometry == job.geometry && r.schedule == job.spec.name)
          group.push_back(&r);
      // Order-independent aggregation.
      std::sort(group.begin(), group.end(),
                [](const RunRecord* a, const RunRecord* b) { return a->seed < b->seed; });
      std::vector<double> iters, times, gaps, inx, iny, objs;
      long conv = 0, faults = 0;
      bool supported = true;
      for (const auto* r : group) {
        iters.push_back(static_cast<double>(r->summary.iterations));
        times.push_back(r->summary.total_ms / 1000.0);
        gaps.push_back(r->summary.xy_gap);
        inx.push_back(static_cast<double>(r->inner_x_total));
        iny.push_back(static_cast<double>(r->inner_y_total));
        objs.push_back(r->final_objective);
        conv += r->summary.reason == Termination::Converged;
        faults += r->summary.reason == Termination::Fault;
        supported = supported && r->summary.theory_supported;
      }
      const std::string head = std::string(variant_label(job.variant));
      const std::string counts = std::to_string(group.size()) + "," + std::to_string(conv) + "," +
                                 std::to_string(faults) + "," + (supported ? "true" : "false");
      switch (cfg_.kind) {
        case ProblemKind::Sigrec:
          out << head << "," << counts << "," << num(median(iters)) << "," << num(mean(iters))
              << "," << num(mean(times)) << "," << num(mean(gaps)) << ","
              << num(gaps.empty() ? std::nan("") : *std::max_element(gaps.begin(), gaps.end()))
              << "\n";
          break;
        case ProblemKind::Qfp:
          out << head << "," << job.geometry << "," << job.spec.name << "," << counts << ","
              << num(median(iters)) << "," << num(mean(iters)) << "," << num(mean(inx)) << ","
              << num(mean(iny)) << "," << num(mean(times)) << "\n";
          break;
        case ProblemKind::Nmf:
          out << head << "," << counts << "," << num(median(iters)) << "," << num(mean(iters))
              << "," << num(mean(objs)) << "," << num(mean(times)) << ","
              << (group.empty() ? std::string() : group.front()->trace.filename().string())
              << "\n";
          break;
      }
    }
    return path;
  }

 private:
  const RunConfig& cfg_;
  std::ostream* log_;
  std::filesystem::path dir_;
};

}  // namespace

SignalRecoveryProblem make_sigrec(const RunConfig& c, std::uint64_t seed) {
  return sigrec_make(c.n, c.m, seed, c.noisy, {c.gamma, c.mu, c.lambda},
                     {c.sparsity, c.noise_variance});
}

SparseNmfProblem make_nmf(const RunConfig& c) {
  Matrix a = c.data.empty() ? nmf_synthetic(c.rows, c.cols, c.rank, c.sparsity, c.seed)
                            : load_matrix(c.data);
  return SparseNmfProblem(std::move(a), c.rank, SparsityBudget{c.sparsity}, c.lambda);
}

QfpProblem make_qfp(const RunConfig& c) {
  QfpData data;
  if (c.instance == "problem1")
    data = qfp_load(qfp_problem1_path());
  else if (c.instance == "random")
    data = qfp_random(c.dim, c.seed);
  else
    data = qfp_load(c.instance);
  data.c = c.c;
  data.d = c.d;
  return QfpProblem(std::move(data), c.gamma, Box{c.box_lo, c.box_hi},
                    QfpInnerOptions{c.inner_tol, static_cast<int>(c.inner_max_iter)});
}

Geometries sigrec_geometries(const SignalRecoveryProblem& p, const RunConfig& c, Variant v) {
  const auto gy = BregmanGeometry::euclidean(c.lambda);
  if (is_euclidean_prox_variant(v) || c.geometry_x == "euclid")
    return {BregmanGeometry::euclidean(c.mu), gy};
  return {p.sigrec_x_geometry(), gy};
}

Geometries qfp_geometries(const RunConfig& c, const GeometryPair& pair) {
  return {BregmanGeometry::from_token(qfp_geometry_token(pair.x), c.mu),
          BregmanGeometry::from_token(qfp_geometry_token(pair.y), c.mu)};
}

Geometries nmf_geometries() {
  return {BregmanGeometry::euclidean(1.0), BregmanGeometry::euclidean(1.0)};
}

void write_trace_csv(std::ostream& out, const RunTrace& trace, const std::string& header) {
  out << "# " << header << "\n";
  out << "k,L,H,delta,Ek,inner_x,inner_y,elapsed_ms\n";
  for (const auto& r : trace.records) {
    out << r.k << "," << num(r.objective) << "," << num(r.benefit) << "," << num(r.delta) << ","
        << num(r.step_gap) << "," << r.inner_x << "," << r.inner_y << "," << num(r.elapsed_ms)
        << "\n";
  }
}

long SuiteResult::converged() const {
  return std::count_if(runs.begin(), runs.end(), [](const RunRecord& r) {
    return r.summary.reason == Termination::Converged;
  });
}

double median(std::vector<double> values) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

SuiteResult run_suite(const RunConfig& cfg, std::ostream* log) {
  SuiteRunner runner(cfg, log);
  SuiteResult result;
  std::vector<Job> jobs;
  auto seed_of = [&cfg](int i) { return cfg.seed + static_cast<std::uint64_t>(i); };

  switch (cfg.kind) {
    case ProblemKind::Sigrec: {
      for (Variant v : cfg.variants) {
        for (int i = 0; i < cfg.repetitions; ++i) {
          const auto problem = make_sigrec(cfg, seed_of(i));
          const Geometries geoms = sigrec_geometries(problem, cfg, v);
          const double rho = admissibility_margin(problem, geoms.x, geoms.y).value_or(0.0);
          const auto specs = schedule_specs(cfg, v, rho);
          if (i == 0) jobs.push_back({v, "", specs.front()});
          result.runs.push_back(runner.execute(problem, geoms, {v, "", specs.front()}, seed_of(i),
                                               problem.initial_point(seed_of(i)), rho));
        }
      }
      break;
    }
    case ProblemKind::Nmf: {
      const auto problem = make_nmf(cfg);
      const Geometries geoms = nmf_geometries();
      for (Variant v : cfg.variants) {
        const auto specs = schedule_specs(cfg, v, 0.0);
        jobs.push_back({v, "", specs.front()});
        for (int i = 0; i < cfg.repetitions; ++i)
          result.runs.push_back(runner.execute(problem, geoms, jobs.back(), seed_of(i),
                                               problem.initial_point(seed_of(i)), 0.0));
      }
      break;
    }
    case ProblemKind::Qfp: {
      const auto problem = make_qfp(cfg);
      for (Variant v : cfg.variants) {
        for (const auto& pair : cfg.geometry_pairs) {
          const Geometries geoms = qfp_geometries(cfg, pair);
          const double rho = admissibility_margin(problem, geoms.x, geoms.y).value_or(0.0);
          for (const auto& spec : schedule_specs(cfg, v, rho)) {
            jobs.push_back({v, pair.label(), spec});
            for (int i = 0; i < cfg.repetitions; ++i)
              result.runs.push_back(runner.execute(problem, geoms, jobs.back(), seed_of(i),
                                                   problem.initial_point(seed_of(i)), rho));
          }
        }
      }
      break;
    }
  }
  result.summary = runner.write_summary(jobs, result.runs);
  return result;
}

}  // namespace tibpalm::bench
