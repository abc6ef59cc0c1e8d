#include "tibpalm/engine.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <string>

#include "tibpalm/errors.hpp"

namespace tibpalm {

namespace {

constexpr double kDivergenceGap = 1e12;

template <class F>
auto guarded(const char* block, long k, F&& solve) {
  try {
    return solve();
  } catch (const DomainError& e) {
    throw SolverFault(block, k, e.what());
  } catch (const InputError& e) {
    throw SolverFault(block, k, e.what());
  } catch (const ConvergenceError& e) {
    throw SolverFault(block, k, e.what());
  }
}

SolverState shifted(const SolverState& s, Vector x_next, Vector y_next) {
  SolverState out;
  out.x_km2 = s.x_km1;
  out.x_km1 = s.x_k;
  out.x_k = std::move(x_next);
  out.y_km2 = s.y_km1;
  out.y_km1 = s.y_k;
  out.y_k = std::move(y_next);
  out.x_tilde = out.x_k;
  out.y_tilde = out.y_k;
  out.iter = s.iter + 1;
  return out;
}

// Inertial drift term α₁(z_{k−1} − z_k) + α₂(z_{k−2} − z_{k−1}) as it enters
// the linear part of a block subproblem.
Vector inertial_linear(double a1, double a2, const Vector& z, const Vector& z1, const Vector& z2) {
  Vector out = a1 * (z1 - z);
  if (a2 != 0.0) out += a2 * (z2 - z1);
  return out;
}

double euclid_scale(const BregmanGeometry& g, const char* block) {
  if (g.kind() != BregmanGeometry::Kind::Euclidean)
    throw ConfigError(std::string("proximal variants need a Euclidean kernel on block ") + block);
  return g.scale();
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

Variant parse_variant(std::string_view name) {
  const std::string n = lower(name);
  for (Variant v : kAllVariants)
    if (n == variant_name(v)) return v;
  throw ConfigError("unknown variant '" + std::string(name) + "'");
}

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::TiBPALM: return "tibpalm";
    case Variant::IBPALM: return "ibpalm";
    case Variant::BPALM: return "bpalm";
    case Variant::PALM: return "palm";
    case Variant::IPALM: return "ipalm";
    case Variant::GiPALM: return "gipalm";
    case Variant::TiBAM: return "tibam";
  }
  return "?";
}

std::string_view variant_label(Variant v) {
  switch (v) {
    case Variant::TiBPALM: return "TiBPALM";
    case Variant::IBPALM: return "iBPALM";
    case Variant::BPALM: return "BPALM";
    case Variant::PALM: return "PALM";
    case Variant::IPALM: return "iPALM";
    case Variant::GiPALM: return "GiPALM";
    case Variant::TiBAM: return "TiBAM";
  }
  return "?";
}

bool is_euclidean_prox_variant(Variant v) {
  return v == Variant::PALM || v == Variant::IPALM || v == Variant::GiPALM;
}

std::string_view termination_name(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::MaxIter: return "max-iter";
    case Termination::Diverged: return "diverged";
    case Termination::Fault: return "fault";
  }
  return "?";
}

SolverState SolverState::initial(const Vector& x0, const Vector& y0) {
  SolverState s;
  s.x_k = s.x_km1 = s.x_km2 = s.x_tilde = x0;
  s.y_k = s.y_km1 = s.y_km2 = s.y_tilde = y0;
  s.iter = 0;
  return s;
}

SolverState tibpalm_step(const SolverState& s, const CoupledProblem& problem,
                         const Geometries& geoms, const InertialSchedule& sched, StepInfo* info) {
  const long k = s.iter;

  const BregmanGeometry gx = problem.x_geometry(geoms.x, s.x_k, s.y_k);
  Vector cx = problem.coupling_grad_x(s.x_k, s.y_k) +
              inertial_linear(sched.alpha1(k), sched.alpha2(k), s.x_k, s.x_km1, s.x_km2);
  BlockResult rx = guarded("x", k, [&] { return problem.solve_x(gx, s.x_k, cx); });

  const BregmanGeometry gy = problem.y_geometry(geoms.y, rx.value, s.y_k);
  Vector cy = problem.coupling_grad_y(rx.value, s.y_k) +
              inertial_linear(sched.beta1(k), sched.beta2(k), s.y_k, s.y_km1, s.y_km2);
  BlockResult ry = guarded("y", k, [&] { return problem.solve_y(gy, s.y_k, cy); });

  if (info) {
    // Optimality of each block gives ∇φ(anchor) − ∇φ(new) − c ∈ ∂f(new).
    const Vector sx = guarded("x", k, [&] {
      return Vector(problem.coupling_grad_x(rx.value, ry.value) - cx + gx.grad(s.x_k) -
                    gx.grad(rx.value));
    });
    const Vector sy = guarded("y", k, [&] {
      return Vector(problem.coupling_grad_y(rx.value, ry.value) - cy + gy.grad(s.y_k) -
                    gy.grad(ry.value));
    });
    info->inner_x = rx.inner;
    info->inner_y = ry.inner;
    info->residual = std::sqrt(sx.squaredNorm() + sy.squaredNorm());
  }
  return shifted(s, std::move(rx.value), std::move(ry.value));
}

namespace {

// Shared body of PALM / iPALM / GiPALM. The x block takes a prox step from
// `x_centre` with ∇ₓQ evaluated at (x_grad, y_lin); the y block takes a prox
// step from `y_centre` with ∇ᵧQ evaluated at (x_for_y(x_new), y_grad).
struct ProxSweep {
  Vector x, y;
  Vector x_for_y;
  StepInfo info;
};

template <class XForY>
ProxSweep prox_sweep(const CoupledProblem& problem, const Geometries& geoms, long k,
                     const Vector& x_centre, const Vector& x_grad, const Vector& y_lin,
                     const Vector& y_centre, const Vector& y_grad, XForY&& x_for_y,
                     bool want_residual) {
  ProxSweep out;
  const BregmanGeometry gx = problem.x_geometry(geoms.x, x_grad, y_lin);
  const double mx = euclid_scale(gx, "x");
  const Vector px = x_centre - problem.coupling_grad_x(x_grad, y_lin) / mx;
  out.x = guarded("x", k, [&] { return problem.prox_x(px, mx); });

  out.x_for_y = x_for_y(out.x);
  const BregmanGeometry gy = problem.y_geometry(geoms.y, out.x_for_y, y_grad);
  const double my = euclid_scale(gy, "y");
  const Vector py = y_centre - problem.coupling_grad_y(out.x_for_y, y_grad) / my;
  out.y = guarded("y", k, [&] { return problem.prox_y(py, my); });

  out.info.inner_x = 1;
  out.info.inner_y = 1;
  if (want_residual) {
    // Prox optimality: μ(p − new) ∈ ∂f(new).
    const Vector sx = problem.coupling_grad_x(out.x, out.y) + mx * (px - out.x);
    const Vector sy = problem.coupling_grad_y(out.x, out.y) + my * (py - out.y);
    out.info.residual = std::sqrt(sx.squaredNorm() + sy.squaredNorm());
  }
  return out;
}

Vector same(const Vector& x) { return x; }

}  // namespace

SolverState palm_step(const SolverState& s, const CoupledProblem& problem, const Geometries& geoms,
                      StepInfo* info) {
  auto sweep =
      prox_sweep(problem, geoms, s.iter, s.x_k, s.x_k, s.y_k, s.y_k, s.y_k, same, info != nullptr);
  if (info) *info = sweep.info;
  return shifted(s, std::move(sweep.x), std::move(sweep.y));
}

SolverState ipalm_step(const SolverState& s, const CoupledProblem& problem,
                       const Geometries& geoms, const InertialSchedule& sched, StepInfo* info) {
  const long k = s.iter;
  const Vector ux = s.x_k + sched.alpha1(k) * (s.x_k - s.x_km1);
  const Vector uy = s.y_k + sched.beta1(k) * (s.y_k - s.y_km1);
  auto sweep = prox_sweep(problem, geoms, k, ux, ux, s.y_k, uy, uy, same, info != nullptr);
  if (info) *info = sweep.info;
  return shifted(s, std::move(sweep.x), std::move(sweep.y));
}

SolverState gipalm_step(const SolverState& s, const CoupledProblem& problem,
                        const Geometries& geoms, const InertialSchedule& sched, StepInfo* info) {
  const long k = s.iter;
  const double a = sched.alpha1(k);
  const double b = sched.beta1(k);
  auto sweep = prox_sweep(
      problem, geoms, k, s.x_tilde, s.x_tilde, s.y_tilde, s.y_tilde, s.y_tilde,
      [&](const Vector& x_new) { return Vector(x_new + a * (x_new - s.x_tilde)); },
      info != nullptr);
  if (info) *info = sweep.info;
  SolverState out = shifted(s, sweep.x, sweep.y);
  out.x_tilde = std::move(sweep.x_for_y);
  out.y_tilde = sweep.y + b * (sweep.y - s.y_tilde);
  return out;
}

SolverState tibam_step(const SolverState& s, const CoupledProblem& problem,
                       const Geometries& geoms, const InertialSchedule& sched, StepInfo* info) {
  const long k = s.iter;
  const BregmanGeometry gx = problem.x_geometry(geoms.x, s.x_k, s.y_k);
  const Vector lx = inertial_linear(sched.alpha1(k), sched.alpha2(k), s.x_k, s.x_km1, s.x_km2);
  BlockResult rx = guarded("x", k, [&] { return problem.exact_x(gx, s.y_k, s.x_k, lx); });

  const BregmanGeometry gy = problem.y_geometry(geoms.y, rx.value, s.y_k);
  const Vector ly = inertial_linear(sched.beta1(k), sched.beta2(k), s.y_k, s.y_km1, s.y_km2);
  BlockResult ry = guarded("y", k, [&] { return problem.exact_y(gy, rx.value, s.y_k, ly); });

  if (info) {
    // Exact optimality: ∇φ(anchor) − ∇φ(new) − ∇Q(new, other_old) − linear ∈ ∂f(new).
    const Vector sx = problem.coupling_grad_x(rx.value, ry.value) -
                      problem.coupling_grad_x(rx.value, s.y_k) + gx.grad(s.x_k) -
                      gx.grad(rx.value) - lx;
    const Vector sy = gy.grad(s.y_k) - gy.grad(ry.value) - ly;
    info->inner_x = rx.inner;
    info->inner_y = ry.inner;
    info->residual = std::sqrt(sx.squaredNorm() + sy.squaredNorm());
  }
  return shifted(s, std::move(rx.value), std::move(ry.value));
}

InertialSchedule effective_schedule(Variant variant, const InertialSchedule& sched) {
  switch (variant) {
    case Variant::IBPALM: return sched.without_two_step();
    case Variant::BPALM:
    case Variant::PALM: return sched.without_inertia();
    case Variant::IPALM:
    case Variant::GiPALM: return sched.without_two_step();
    default: return sched;
  }
}

SolverState variant_step(Variant variant, const SolverState& state, const CoupledProblem& problem,
                         const Geometries& geoms, const InertialSchedule& sched, StepInfo* info) {
  const InertialSchedule eff = effective_schedule(variant, sched);
  switch (variant) {
    case Variant::TiBPALM:
    case Variant::IBPALM:
    case Variant::BPALM: return tibpalm_step(state, problem, geoms, eff, info);
    case Variant::PALM: return palm_step(state, problem, geoms, info);
    case Variant::IPALM: return ipalm_step(state, problem, geoms, eff, info);
    case Variant::GiPALM: return gipalm_step(state, problem, geoms, eff, info);
    case Variant::TiBAM: return tibam_step(state, problem, geoms, eff, info);
  }
  throw ConfigError("unhandled variant");
}

double benefit_H(const CoupledProblem& problem, const InertialSchedule& sched,
                 const BlockPoint& z, const BlockPoint& z_prev, const BlockPoint& z_prev2) {
  const double d1 = (z.x - z_prev.x).squaredNorm() + (z.y - z_prev.y).squaredNorm();
  const double d2 = (z_prev.x - z_prev2.x).squaredNorm() + (z_prev.y - z_prev2.y).squaredNorm();
  const double a1 = sched.alpha1_bound;
  const double a2 = sched.alpha2_bound;
  return problem.objective(z) + 0.5 * (a1 + a2) * d1 + 0.5 * a2 * d2;
}

double criticality_residual(const CoupledProblem& problem, const Geometries& geoms,
                            const InertialSchedule& sched, const SolverState& before,
                            const SolverState& after) {
  const long k = before.iter;
  const Vector& x0 = before.x_k;
  const Vector& y0 = before.y_k;
  const Vector& x1 = after.x_k;
  const Vector& y1 = after.y_k;
  const BregmanGeometry gx = problem.x_geometry(geoms.x, x0, y0);
  const BregmanGeometry gy = problem.y_geometry(geoms.y, x1, y0);

  const Vector sx = problem.coupling_grad_x(x1, y1) - problem.coupling_grad_x(x0, y0) +
                    gx.grad(x0) - gx.grad(x1) + sched.alpha1(k) * (x0 - before.x_km1) +
                    sched.alpha2(k) * (before.x_km1 - before.x_km2);
  const Vector sy = problem.coupling_grad_y(x1, y1) - problem.coupling_grad_y(x1, y0) +
                    gy.grad(y0) - gy.grad(y1) + sched.beta1(k) * (y0 - before.y_km1) +
                    sched.beta2(k) * (before.y_km1 - before.y_km2);
  return std::sqrt(sx.squaredNorm() + sy.squaredNorm());
}

std::optional<double> validate_run(const CoupledProblem& problem, const Geometries& geoms,
                                   const InertialSchedule& sched, const RunOptions& options) {
  const Variant v = options.variant;
  if (is_euclidean_prox_variant(v)) {
    euclid_scale(geoms.x, "x");
    euclid_scale(geoms.y, "y");
  }
  problem.check_geometries(geoms.x, geoms.y);
  if (v == Variant::TiBAM && !problem.supports_exact_blocks(geoms.x, geoms.y))
    throw ConfigError(std::string(problem.name()) +
                      " provides no exact block minimizers for this kernel pair (needed by tibam)");
  if (!(options.stop.tol >= 0)) throw ConfigError("stopping tolerance must be nonnegative");
  if (options.stop.max_iter < 0) throw ConfigError("max_iter must be nonnegative");

  const InertialSchedule eff = effective_schedule(v, sched);
  const auto margin = admissibility_margin(problem, geoms.x, geoms.y);
  try {
    if (!margin)
      throw ConfigError(std::string(problem.name()) +
                        ": no coupling bounds, admissibility cannot be established");
    if (eff.rho > *margin + 1e-12 * (1.0 + std::abs(*margin)))
      throw ConfigError("schedule margin rho = " + std::to_string(eff.rho) +
                        " exceeds the problem margin " + std::to_string(*margin));
    if (eff.uses_extrapolation())
      throw ConfigError("extrapolation schedule (k-1)/(k+2) violates 2(alpha1 + alpha2) < rho");
    return validate_schedule(eff);
  } catch (const ConfigError&) {
    if (options.override_theory) return std::nullopt;
    throw;
  }
}

RunTrace run(const CoupledProblem& problem, const Geometries& geoms,
             const InertialSchedule& sched, const RunOptions& options, const BlockPoint& start) {
  if (start.x.size() != problem.x_size() || start.y.size() != problem.y_size())
    throw ConfigError("starting point has the wrong dimensions");
  const auto margin = validate_run(problem, geoms, sched, options);

  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  auto elapsed = [&] {
    if (!options.record_time) return 0.0;
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  };

  RunTrace trace;
  trace.summary.margin = margin;
  trace.summary.theory_supported = margin.has_value();
  const InertialSchedule eff = effective_schedule(options.variant, sched);

  SolverState state = SolverState::initial(start.x, start.y);
  const double L0 = problem.objective(start);
  {
    IterationRecord r;
    r.k = 0;
    r.objective = L0;
    r.benefit = L0;
    r.delta = 0.0;
    r.elapsed_ms = elapsed();
    trace.records.push_back(r);
  }
  if (options.observer) options.observer(state);

  auto finish = [&](Termination reason, std::string message = {}) {
    trace.summary.reason = reason;
    trace.summary.message = std::move(message);
  };

  if (std::isinf(options.stop.tol) && options.stop.tol > 0) {
    finish(Termination::Converged);
  } else {
    while (true) {
      if (state.iter >= options.stop.max_iter) {
        finish(Termination::MaxIter);
        break;
      }
      StepInfo info;
      SolverState next;
      try {
        next = variant_step(options.variant, state, problem, geoms, sched, &info);
      } catch (const SolverFault& e) {
        finish(Termination::Fault, e.what());
        break;
      }
      const double dx = (next.x_k - state.x_k).norm();
      const double dy = (next.y_k - state.y_k).norm();
      state = std::move(next);
      if (options.observer) options.observer(state);

      IterationRecord r;
      r.k = state.iter;
      r.step_gap = dx + dy;
      r.delta = std::sqrt(dx * dx + dy * dy);
      r.inner_x = info.inner_x;
      r.inner_y = info.inner_y;
      r.residual = info.residual;
      const bool finite = state.x_k.allFinite() && state.y_k.allFinite();
      r.objective = finite ? problem.objective(state.current())
                           : std::numeric_limits<double>::quiet_NaN();
      r.benefit = finite ? benefit_H(problem, eff, state.current(), state.previous(),
                                     state.previous2())
                         : std::numeric_limits<double>::quiet_NaN();
      r.elapsed_ms = elapsed();
      trace.records.push_back(r);

      if (!finite || !std::isfinite(r.objective) || r.objective > L0 + kDivergenceGap) {
        finish(Termination::Diverged, "objective or iterate left the finite range");
        break;
      }
      if (r.step_gap < options.stop.tol) {
        finish(Termination::Converged);
        break;
      }
    }
  }

  trace.summary.iterations = state.iter;
  trace.summary.total_ms = elapsed();
  if (state.x_k.size() == state.y_k.size())
    trace.summary.xy_gap = (state.x_k - state.y_k).norm();
  trace.final_state = std::move(state);
  return trace;
}

RunTrace run(const CoupledProblem& problem, const Geometries& geoms,
             const InertialSchedule& sched, const RunOptions& options, std::uint64_t seed) {
  return run(problem, geoms, sched, options, problem.initial_point(seed));
}

}  // namespace tibpalm
