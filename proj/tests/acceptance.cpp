// Acceptance suite: one PASS/FAIL line per criterion on stdout, details on
// stderr. Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "oracles.hpp"
#include "tibpalm/bench/config.hpp"
#include "tibpalm/bench/suite.hpp"
#include "tibpalm/bregman.hpp"
#include "tibpalm/diagnostics.hpp"
#include "tibpalm/engine.hpp"
#include "tibpalm/prox.hpp"
#include "tibpalm/random.hpp"

using namespace tibpalm;
using namespace tibpalm::bench;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

// ---------------------------------------------------------------- sigrec runs

constexpr int kSigrecSeeds = 10;

struct SigrecKey {
  long n, m;
  bool noisy;
  Variant variant;
  int seed;
  auto tie() const { return std::tuple(n, m, noisy, static_cast<int>(variant), seed); }
  bool operator<(const SigrecKey& o) const { return tie() < o.tie(); }
};

// Full-length traces shared by criteria 1, 2 and 10.
std::map<SigrecKey, RunTrace>& sigrec_cache() {
  static std::map<SigrecKey, RunTrace> cache;
  return cache;
}

RunConfig sigrec_config(long n, long m, bool noisy) {
  auto cfg = default_config(ProblemKind::Sigrec);
  cfg.n = n;
  cfg.m = m;
  cfg.noisy = noisy;
  return cfg;
}

const RunTrace& sigrec_run(long n, long m, bool noisy, Variant v, int seed) {
  auto& cache = sigrec_cache();
  const SigrecKey key{n, m, noisy, v, seed};
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  const auto cfg = sigrec_config(n, m, noisy);
  const auto p = make_sigrec(cfg, static_cast<std::uint64_t>(seed));
  const auto g = sigrec_geometries(p, cfg, v);
  const double rho = admissibility_margin(p, g.x, g.y).value_or(0.0);
  const auto sched = realize(schedule_specs(cfg, v, rho).front(), rho);
  RunOptions opts;
  opts.variant = v;
  opts.stop = {cfg.tol, cfg.max_iter};
  opts.record_time = false;
  return cache.emplace(key, run(p, g, sched, opts, 0)).first->second;
}

// 1. Sufficient decrease of H along TiBPALM on sigrec.
Outcome criterion1() {
  const auto t0 = Clock::now();
  constexpr double a = 0.004;
  long checked = 0;
  double worst = INFINITY;
  std::string first_failure;
  for (bool noisy : {false, true}) {
    for (int seed = 1; seed <= kSigrecSeeds; ++seed) {
      const auto& t = sigrec_run(40, 200, noisy, Variant::TiBPALM, seed);
      const auto mono = monotonicity_check(t.records, 1e-9);
      const auto suff = sufficient_decrease_check(t.records, a, 1e-9);
      for (std::size_t k = 0; k < suff.slacks.size(); ++k) {
        const double scale = 1.0 + std::abs(t.records[k].benefit);
        worst = std::min(worst, suff.slacks[k] / scale);
      }
      checked += static_cast<long>(suff.slacks.size());
      if ((!mono.passed() || !suff.passed()) && first_failure.empty())
        first_failure = " first violation: seed " + std::to_string(seed) +
                        (noisy ? " noisy" : " noiseless") + " k=" +
                        std::to_string(mono.passed() ? *suff.first_violation : *mono.first_violation);
    }
  }
  const double secs = seconds_since(t0);
  const bool pass = first_failure.empty() && secs <= 120.0;
  return {pass, std::to_string(checked) + " steps, min relative slack " + fmt(worst) + ", " +
                    fmt(secs) + " s" + first_failure};
}

// 2. Median iteration ordering TiBPALM < TiBAM < iBPALM < BPALM.
Outcome criterion2() {
  const auto t0 = Clock::now();
  const Variant order[] = {Variant::TiBPALM, Variant::TiBAM, Variant::IBPALM, Variant::BPALM};
  bool pass = true;
  std::string detail;
  for (auto [n, m] : {std::pair{40L, 200L}, std::pair{100L, 500L}}) {
    for (bool noisy : {false, true}) {
      std::vector<double> med;
      for (Variant v : order) {
        std::vector<double> iters;
        for (int seed = 1; seed <= kSigrecSeeds; ++seed)
          iters.push_back(static_cast<double>(sigrec_run(n, m, noisy, v, seed).summary.iterations));
        med.push_back(median(iters));
      }
      const bool ok = med[0] < med[1] && med[1] < med[2] && med[2] < med[3];
      pass = pass && ok;
      detail += "(" + std::to_string(n) + "," + std::to_string(m) + (noisy ? ",noisy" : "") +
                ") " + fmt(med[0]) + "/" + fmt(med[1]) + "/" + fmt(med[2]) + "/" + fmt(med[3]) +
                (ok ? " ok; " : " out of order; ");
    }
  }
  const double secs = seconds_since(t0);
  pass = pass && secs <= 600.0;
  return {pass, "medians TiBPALM/TiBAM/iBPALM/BPALM " + detail + fmt(secs) + " s"};
}

// 3. Variant reductions, iterate for iterate.
double trajectory_gap(const CoupledProblem& p, const Geometries& ga, const InertialSchedule& sa,
                      Variant va, const Geometries& gb, const InertialSchedule& sb, Variant vb,
                      long iters) {
  auto collect = [&](const Geometries& g, const InertialSchedule& s, Variant v) {
    std::vector<BlockPoint> pts;
    RunOptions opts;
    opts.variant = v;
    opts.stop = {0.0, iters};
    opts.override_theory = true;
    opts.record_time = false;
    opts.observer = [&](const SolverState& st) { pts.push_back(st.current()); };
    run(p, g, s, opts, 0);
    return pts;
  };
  const auto a = collect(ga, sa, va);
  const auto b = collect(gb, sb, vb);
  if (a.size() != b.size() || static_cast<long>(a.size()) < iters + 1) return INFINITY;
  double gap = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    gap = std::max({gap, (a[k].x - b[k].x).lpNorm<Eigen::Infinity>(),
                    (a[k].y - b[k].y).lpNorm<Eigen::Infinity>()});
  return gap;
}

Outcome criterion3() {
  constexpr long iters = 200;
  double worst_ib = 0.0, worst_palm = 0.0;
  for (int seed = 1; seed <= 3; ++seed) {
    const auto cfg = sigrec_config(40, 200, seed == 2);
    const auto p = make_sigrec(cfg, static_cast<std::uint64_t>(seed));
    const auto g = sigrec_geometries(p, cfg, Variant::TiBPALM);
    const double rho = *admissibility_margin(p, g.x, g.y);
    const double al = 0.99 * rho / 2;
    const auto one_step = InertialSchedule::constant(al, 0.0, al, 0.0, rho);
    const auto two_step = InertialSchedule::constant(al, 0.15, al, 0.15, rho);
    worst_ib = std::max(worst_ib, trajectory_gap(p, g, one_step, Variant::TiBPALM, g, two_step,
                                                 Variant::IBPALM, iters));

    const Geometries eu{BregmanGeometry::euclidean(cfg.mu), BregmanGeometry::euclidean(cfg.lambda)};
    const auto none = InertialSchedule::none(rho);
    worst_palm = std::max(
        worst_palm, trajectory_gap(p, eu, none, Variant::TiBPALM, eu, none, Variant::PALM, iters));
  }
  const bool pass = worst_ib <= 1e-12 && worst_palm <= 1e-12;
  return {pass, std::to_string(iters) + " iterations x 3 seeds, max gap vs iBPALM " +
                    fmt(worst_ib) + ", vs PALM " + fmt(worst_palm)};
}

// 4. Half shrinkage against a brute-force scalar minimizer.
Outcome criterion4() {
  Rng rng(2024);
  double worst_arg = 0.0, worst_obj = -INFINITY;
  for (int i = 0; i < 1000; ++i) {
    const double a = rng.uniform(-5.0, 5.0), kappa = rng.uniform(0.01, 3.0);
    auto obj = [&](double t) { return kappa * std::sqrt(std::abs(t)) + 0.5 * (t - a) * (t - a); };
    const double r = std::abs(a) + 1.0;
    const double ref = oracle::grid_minimize(obj, -r, r, 1e-4, {0.0});
    const double h = half_shrinkage(a, kappa);
    worst_arg = std::max(worst_arg, std::abs(h - ref));
    worst_obj = std::max(worst_obj, obj(h) - obj(ref));
  }
  return {worst_arg <= 1e-6 && worst_obj <= 1e-10,
          "1000 pairs, max |h - oracle| " + fmt(worst_arg) + ", max objective excess " +
              fmt(worst_obj)};
}

// 5. Analytic gradients against central differences.
double matrix_fd_error(const std::function<double(const Matrix&)>& f, const Matrix& at,
                       const Matrix& grad) {
  Matrix fd(at.rows(), at.cols());
  for (Index j = 0; j < at.cols(); ++j)
    for (Index i = 0; i < at.rows(); ++i) {
      const double h = 1e-6 * std::max(1.0, std::abs(at(i, j)));
      Matrix p = at, q = at;
      p(i, j) += h;
      q(i, j) -= h;
      fd(i, j) = (f(p) - f(q)) / (2 * h);
    }
  return (grad - fd).norm() / std::max(grad.norm(), 1e-12);
}

Outcome criterion5() {
  Rng rng(77);
  const double lambda = 0.5;
  const Matrix A = nmf_synthetic(60, 40, 10, 0.25, 3);
  double worst_x = 0.0, worst_y = 0.0, worst_q = 0.0;
  for (int t = 0; t < 100; ++t) {
    Matrix X(60, 10), Y(10, 40);
    for (Index i = 0; i < X.size(); ++i) X.data()[i] = rng.uniform(0.0, 1.0);
    for (Index i = 0; i < Y.size(); ++i) Y.data()[i] = rng.uniform(0.0, 1.0);
    worst_x = std::max(worst_x, matrix_fd_error([&](const Matrix& m) {
      return nmf_objective(A, m, Y, lambda);
    }, X, nmf_grad_x(A, X, Y, lambda)));
    worst_y = std::max(worst_y, matrix_fd_error([&](const Matrix& m) {
      return nmf_objective(A, X, m, lambda);
    }, Y, nmf_grad_y(A, X, Y, lambda)));
  }
  const QfpProblem qfp{qfp_load(qfp_problem1_path())};
  for (int t = 0; t < 100; ++t) {
    Matrix x(5, 1);
    for (Index i = 0; i < 5; ++i) x(i, 0) = rng.uniform(1.0, 3.0);
    const Vector g = qfp.gradient(x.col(0));
    worst_q = std::max(worst_q, matrix_fd_error([&](const Matrix& m) {
      return qfp.value(m.col(0));
    }, x, g));
  }
  const bool pass = worst_x <= 1e-5 && worst_y <= 1e-5 && worst_q <= 1e-5;
  return {pass, "max relative error grad_X " + fmt(worst_x) + ", grad_Y " + fmt(worst_y) +
                    ", qfp " + fmt(worst_q)};
}

// 6. D(x, y) >= theta/2 |x - y|^2 on each declared box.
Outcome criterion6() {
  Rng rng(6);
  std::string detail;
  bool pass = true;
  auto trial = [&](const std::string& name, const BregmanGeometry& g, Index dim, Box box,
                   double theta) {
    double worst = INFINITY;
    for (int i = 0; i < 1000; ++i) {
      Vector x(dim), y(dim);
      for (Index j = 0; j < dim; ++j) {
        x(j) = rng.uniform(box.lo, box.hi);
        y(j) = rng.uniform(box.lo, box.hi);
      }
      const double bound = 0.5 * theta * (x - y).squaredNorm();
      const double d = bregman_distance(g, x, y);
      worst = std::min(worst, (d - bound) / (1.0 + d));
    }
    const bool ok = theta > 0 && worst >= -1e-12;
    pass = pass && ok;
    detail += name + " " + fmt(worst) + "; ";
  };
  for (Box box : {Box{1, 3}, Box{0.1, 10}}) {
    const std::string tag = "[" + fmt(box.lo) + "," + fmt(box.hi) + "]";
    for (const auto& g : {BregmanGeometry::euclidean(36), BregmanGeometry::kl(36),
                          BregmanGeometry::itakura_saito(36)})
      trial(std::string(g.token()) + tag, g, 5, box, g.theta(box));
  }
  const auto p = sigrec_make(40, 200, 1, false);
  const auto maha = p.sigrec_x_geometry();
  trial("mahalanobis[-5,5]", maha, 200, Box{-5, 5}, maha.theta());
  return {pass, "min relative slack " + detail};
}

// 7 and 8 share the QFP runs.
struct QfpOutcome {
  Outcome trend, feasibility;
};

QfpOutcome criteria7and8() {
  const auto t0 = Clock::now();
  auto cfg = default_config(ProblemKind::Qfp);
  const auto problem = make_qfp(cfg);
  const double box_lo = cfg.box_lo, box_hi = cfg.box_hi;
  bool trend = true, feasible = true;
  long faults = 0, checked_iterates = 0;
  std::string detail;
  for (const auto& pair : cfg.geometry_pairs) {
    const auto g = qfp_geometries(cfg, pair);
    const double rho = admissibility_margin(problem, g.x, g.y).value_or(0.0);
    std::map<std::string, double> med;
    for (const auto& spec : schedule_specs(cfg, Variant::TiBPALM, rho)) {
      const auto sched = realize(spec, rho);
      std::vector<double> iters;
      for (int start = 1; start <= 30; ++start) {
        RunOptions opts;
        opts.stop = {cfg.tol, cfg.max_iter};
        opts.override_theory = true;
        opts.record_time = false;
        opts.observer = [&](const SolverState& s) {
          ++checked_iterates;
          if ((s.y_k.array() < box_lo).any() || (s.y_k.array() > box_hi).any()) feasible = false;
          if (!(problem.denominator(s.x_k) > 0)) feasible = false;
        };
        const auto t = run(problem, g, sched, opts, static_cast<std::uint64_t>(start));
        if (t.summary.reason == Termination::Fault) ++faults;
        iters.push_back(static_cast<double>(t.summary.iterations));
      }
      med[spec.name] = median(iters);
    }
    const bool ok = med.at("two-step") <= med.at("one-step");
    trend = trend && ok;
    detail += pair.label() + " " + fmt(med.at("two-step")) + "/" + fmt(med.at("one-step")) +
              (ok ? "" : " (two-step slower)") + "; ";
  }
  const double secs = seconds_since(t0);
  trend = trend && secs <= 300.0;
  const double vertex = problem.min_vertex_denominator();
  feasible = feasible && faults == 0 && vertex == 19.0;
  return {{trend, "medians two-step/one-step " + detail + fmt(secs) + " s"},
          {feasible, std::to_string(checked_iterates) + " iterates checked, " +
                         std::to_string(faults) + " faults, min vertex denominator " + fmt(vertex)}};
}

// 9. NMF feasibility of every iterate and PALM monotonicity.
Outcome criterion9() {
  auto cfg = default_config(ProblemKind::Nmf);
  cfg.rows = 60;
  cfg.cols = 40;
  cfg.rank = 10;
  cfg.sparsity = 0.25;
  const auto problem = make_nmf(cfg);
  const auto g = nmf_geometries();
  const Index keep = static_cast<Index>(std::ceil(0.25 * 60));
  bool pass = true;
  std::string detail;
  for (Variant v : {Variant::PALM, Variant::IPALM, Variant::GiPALM, Variant::TiBPALM}) {
    const auto sched = realize(schedule_specs(cfg, v, 0.0).front(), 0.0);
    RunOptions opts;
    opts.variant = v;
    opts.stop = {0.0, 300};
    opts.override_theory = true;
    opts.record_time = false;
    bool ok = true;
    opts.observer = [&](const SolverState& s) {
      const Matrix X = problem.X_of(s.x_k), Y = problem.Y_of(s.y_k);
      if ((X.array() < 0).any() || (Y.array() < 0).any()) ok = false;
      for (Index j = 0; j < X.cols(); ++j)
        if ((X.col(j).array() != 0).count() > keep) ok = false;
    };
    const auto t = run(problem, g, sched, opts, cfg.seed);
    ok = ok && t.summary.iterations == 300;
    if (v == Variant::PALM) ok = ok && objective_monotonicity_check(t.records, 1e-8).passed();
    pass = pass && ok;
    detail += std::string(variant_label(v)) + (ok ? " ok" : " FAILED") + " (L=" +
              fmt(t.records.back().objective) + "); ";
  }
  return {pass, "300 iterations: " + detail};
}

// 10. Criticality residual decay on every converged sigrec run.
Outcome criterion10() {
  long runs = 0;
  double worst = 0.0;
  for (const auto& [key, t] : sigrec_cache()) {
    if (t.summary.reason != Termination::Converged || t.records.size() < 3) continue;
    ++runs;
    worst = std::max(worst, t.records.back().residual / t.records[1].residual);
  }
  return {runs > 0 && worst <= 0.01,
          std::to_string(runs) + " converged runs, max final/initial residual ratio " + fmt(worst)};
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> checks;
  QfpOutcome qfp;
  checks.emplace_back("H-descent on signal recovery", criterion1);
  checks.emplace_back("iteration ordering on signal recovery", criterion2);
  checks.emplace_back("reduction equivalences", criterion3);
  checks.emplace_back("half shrinkage oracle", criterion4);
  checks.emplace_back("gradient checks", criterion5);
  checks.emplace_back("Bregman strong convexity bound", criterion6);
  checks.emplace_back("QFP two-step vs one-step", [&] {
    qfp = criteria7and8();
    return qfp.trend;
  });
  checks.emplace_back("QFP feasibility", [&] { return qfp.feasibility; });
  checks.emplace_back("NMF constraints", criterion9);
  checks.emplace_back("criticality residual decay", criterion10);

  int failures = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    Outcome o;
    try {
      o = checks[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %zu %s\n", o.pass ? "PASS" : "FAIL", i + 1, checks[i].first.c_str());
    std::fflush(stdout);
    std::cerr << "  " << o.detail << '\n';
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(checks.size()) - failures,
              checks.size());
  return failures == 0 ? 0 : 1;
}
