#pragma once

#include <optional>
#include <vector>

#include "tibpalm/engine.hpp"

namespace tibpalm {

/// Outcome of a per-iteration inequality check over a trace.
struct DescentReport {
  /// One slack per consecutive record pair (k, k+1).
  std::vector<double> slacks;
  /// Index k of the first pair whose slack is below −tol_rel·(1 + |H_k|).
  std::optional<std::size_t> first_violation;
  bool passed() const { return !first_violation; }
};

/// Slacks H_k − H_{k+1} − a·Δ²_{k+1} of the sufficient-decrease inequality.
/// Needs at least two records; with fewer the report is empty and passes.
DescentReport sufficient_decrease_check(const std::vector<IterationRecord>& records, double a,
                                        double tol_rel = 1e-9);

/// Slacks H_k − H_{k+1} (monotonicity only).
DescentReport monotonicity_check(const std::vector<IterationRecord>& records,
                                 double tol_rel = 1e-9);

/// Same check on the objective column: L_k − L_{k+1} ≥ −tol_rel·(1 + |L_k|).
DescentReport objective_monotonicity_check(const std::vector<IterationRecord>& records,
                                           double tol_rel = 1e-8);

/// Σ Δ²_k over the trace against the telescoped bound (L(z₀) − min L)/a.
struct SummabilityReport {
  double sum_sq_steps = 0.0;
  double bound = 0.0;
  bool passed(double slack = 1e-6) const { return sum_sq_steps <= bound + slack; }
};

SummabilityReport square_summability_check(const std::vector<IterationRecord>& records, double a);

}  // namespace tibpalm
