#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tibpalm/bregman.hpp"
#include "tibpalm/problem.hpp"
#include "tibpalm/schedule.hpp"

namespace tibpalm {

/// Iteration schemes. The first three share one step: IBPALM and BPALM are
/// the two-step inertial Bregman scheme with its two-step (resp. all)
/// inertial sequences forced to zero.
enum class Variant { TiBPALM, IBPALM, BPALM, PALM, IPALM, GiPALM, TiBAM };

inline constexpr Variant kAllVariants[] = {Variant::TiBPALM, Variant::IBPALM, Variant::BPALM,
                                           Variant::PALM,    Variant::IPALM,  Variant::GiPALM,
                                           Variant::TiBAM};

/// Case-insensitive; throws ConfigError for unknown names.
Variant parse_variant(std::string_view name);
/// Lower-case canonical name ("tibpalm", "ipalm", ...).
std::string_view variant_name(Variant v);
/// Display label ("TiBPALM", "iPALM", ...).
std::string_view variant_label(Variant v);
/// True for the proximal (Euclidean-only) family PALM / iPALM / GiPALM.
bool is_euclidean_prox_variant(Variant v);

struct Geometries {
  BregmanGeometry x;
  BregmanGeometry y;
};

/// Rolling window (z_k, z_{k−1}, z_{k−2}) of iterates. The tilde points are
/// the extrapolated sequence used by GiPALM; other schemes leave them equal
/// to the current iterate.
struct SolverState {
  Vector x_k, x_km1, x_km2;
  Vector y_k, y_km1, y_km2;
  Vector x_tilde, y_tilde;
  long iter = 0;

  /// All window slots set to (x0, y0).
  static SolverState initial(const Vector& x0, const Vector& y0);

  BlockPoint current() const { return {x_k, y_k}; }
  BlockPoint previous() const { return {x_km1, y_km1}; }
  BlockPoint previous2() const { return {x_km2, y_km2}; }
};

/// Per-step by-products.
struct StepInfo {
  int inner_x = 0;
  int inner_y = 0;
  /// ‖s_{k+1}‖: norm of the subgradient of L at the new iterate implied by
  /// the block optimality conditions.
  double residual = 0.0;
};

/// One sweep of the two-step inertial Bregman scheme: the x block is solved at
/// the linearization point (x_k, y_k), then the y block at (x_{k+1}, y_k),
/// and the window shifts. Throws SolverFault if a block solve fails.
SolverState tibpalm_step(const SolverState& state, const CoupledProblem& problem,
                         const Geometries& geoms, const InertialSchedule& sched,
                         StepInfo* info = nullptr);

/// Proximal alternating linearized minimization with step 1/μ taken from the
/// Euclidean kernels' scales.
SolverState palm_step(const SolverState& state, const CoupledProblem& problem,
                      const Geometries& geoms, StepInfo* info = nullptr);

/// Inertial PALM: prox centre and gradient point are both extrapolated with
/// alpha1 (x block) and beta1 (y block).
SolverState ipalm_step(const SolverState& state, const CoupledProblem& problem,
                       const Geometries& geoms, const InertialSchedule& sched,
                       StepInfo* info = nullptr);

/// Gauss–Seidel inertial PALM on the tilde sequence, with α = alpha1(k) and
/// β = beta1(k).
SolverState gipalm_step(const SolverState& state, const CoupledProblem& problem,
                        const Geometries& geoms, const InertialSchedule& sched,
                        StepInfo* info = nullptr);

/// Two-step inertial Bregman alternating minimization: exact block
/// minimization of L plus the Bregman and inertial terms.
SolverState tibam_step(const SolverState& state, const CoupledProblem& problem,
                       const Geometries& geoms, const InertialSchedule& sched,
                       StepInfo* info = nullptr);

/// Dispatches to the step of `variant`, applying the variant's schedule
/// reduction first.
SolverState variant_step(Variant variant, const SolverState& state, const CoupledProblem& problem,
                         const Geometries& geoms, const InertialSchedule& sched,
                         StepInfo* info = nullptr);

/// The schedule a variant actually runs with (IBPALM drops the two-step
/// terms; BPALM and PALM drop all inertia; the others run it unchanged).
InertialSchedule effective_schedule(Variant variant, const InertialSchedule& sched);

/// H(z, z′, z″) = L(z) + ((α₁+α₂)/2)‖z − z′‖² + (α₂/2)‖z′ − z″‖², with the
/// schedule's bounds α₁, α₂.
double benefit_H(const CoupledProblem& problem, const InertialSchedule& sched,
                 const BlockPoint& z, const BlockPoint& z_prev, const BlockPoint& z_prev2);

/// ‖s_{k+1}‖ for the two-step Bregman scheme recomputed from its closed form:
///   s_x = ∇ₓQ(z_{k+1}) − ∇ₓQ(z_k) + ∇φ₁(x_k) − ∇φ₁(x_{k+1})
///         + α₁ₖ(x_k − x_{k−1}) + α₂ₖ(x_{k−1} − x_{k−2}),
///   s_y = ∇ᵧQ(z_{k+1}) − ∇ᵧQ(x_{k+1}, y_k) + ∇φ₂(y_k) − ∇φ₂(y_{k+1})
///         + β₁ₖ(y_k − y_{k−1}) + β₂ₖ(y_{k−1} − y_{k−2}),
/// where `before` holds z_k, z_{k−1}, z_{k−2} and `after` holds z_{k+1}.
double criticality_residual(const CoupledProblem& problem, const Geometries& geoms,
                            const InertialSchedule& sched, const SolverState& before,
                            const SolverState& after);

struct StoppingRule {
  /// Stop once E_k = ‖x_{k+1} − x_k‖ + ‖y_{k+1} − y_k‖ < tol. An infinite
  /// tolerance accepts the starting point.
  double tol = 1e-4;
  long max_iter = 10000;
};

enum class Termination { Converged, MaxIter, Diverged, Fault };
std::string_view termination_name(Termination t);

struct IterationRecord {
  long k = 0;
  double objective = 0.0;  // L(z_k)
  double benefit = 0.0;    // H(z_k, z_{k−1}, z_{k−2})
  double delta = 0.0;      // Δ_k = ‖z_k − z_{k−1}‖
  double step_gap = std::numeric_limits<double>::quiet_NaN();  // E at this step
  double residual = std::numeric_limits<double>::quiet_NaN();  // ‖s_k‖
  int inner_x = 0;
  int inner_y = 0;
  double elapsed_ms = 0.0;
};

struct RunSummary {
  long iterations = 0;
  double total_ms = 0.0;
  /// ‖x_k − y_k‖ when both blocks have the same size, NaN otherwise.
  double xy_gap = std::numeric_limits<double>::quiet_NaN();
  Termination reason = Termination::MaxIter;
  std::string message;
  /// False when the run was started through the override path with a
  /// schedule that does not satisfy 2(α₁ + α₂) < ρ.
  bool theory_supported = true;
  /// a = (ρ − 2(α₁ + α₂))/2 when the schedule is admissible.
  std::optional<double> margin;
};

/// Per-iteration records (k = 0 is the starting point) plus the summary.
struct RunTrace {
  std::vector<IterationRecord> records;
  RunSummary summary;
  SolverState final_state;
};

struct RunOptions {
  Variant variant = Variant::TiBPALM;
  StoppingRule stop;
  /// Run even if the schedule is not provably admissible; the trace is then
  /// marked theory-unsupported.
  bool override_theory = false;
  /// Record wall-clock times; when false elapsed_ms stays 0 so that traces
  /// are reproducible byte for byte.
  bool record_time = true;
  /// Called with every state, starting with the initial one.
  std::function<void(const SolverState&)> observer;
};

/// Checks variant/problem/kernel compatibility and schedule admissibility.
/// Returns the margin a when admissible. Throws ConfigError otherwise, unless
/// options.override_theory is set (compatibility errors are never overridden).
std::optional<double> validate_run(const CoupledProblem& problem, const Geometries& geoms,
                                   const InertialSchedule& sched, const RunOptions& options);

RunTrace run(const CoupledProblem& problem, const Geometries& geoms,
             const InertialSchedule& sched, const RunOptions& options, const BlockPoint& start);

/// Same, starting from problem.initial_point(seed).
RunTrace run(const CoupledProblem& problem, const Geometries& geoms,
             const InertialSchedule& sched, const RunOptions& options, std::uint64_t seed);

}  // namespace tibpalm
