#pragma once

#include "tibpalm/linalg.hpp"

namespace tibpalm {

/// Per-column ℓ0 budget: each column of length n may keep at most
/// ceil(fraction·n) nonzeros.
struct SparsityBudget {
  double fraction = 1.0;

  /// Throws InputError unless 0 < fraction ≤ 1.
  void validate() const;
  /// Number of entries a column of `length` may keep (at least 1).
  Index keep(Index length) const;
};

/// Scalar half-shrinkage h_κ(a): the global minimizer of
/// t ↦ κ|t|^{1/2} + ½(t − a)². Zero when |a| ≤ (3/2)κ^{2/3}, odd in a.
double half_shrinkage(double a, double kappa);

/// Elementwise half-shrinkage. Throws InputError if kappa ≤ 0.
Vector half_shrinkage(const Vector& a, double kappa);

/// Threshold (3/2)κ^{2/3} at or below which half_shrinkage returns 0.
double half_shrinkage_threshold(double kappa);

/// Elementwise clamp to [lo, hi].
Vector project_box(const Vector& v, double lo, double hi);

/// Elementwise max(v, 0).
Vector project_nonneg(const Vector& v);

/// Euclidean projection onto {u ≥ 0, ‖u‖₀ ≤ k}, k = budget.keep(col.size()):
/// keeps the k largest positive entries (lowest index wins ties).
Vector project_sparse_nonneg(const Vector& col, const SparsityBudget& budget);

/// project_sparse_nonneg applied to every column of `m`.
Matrix project_sparse_nonneg_columns(const Matrix& m, const SparsityBudget& budget);

}  // namespace tibpalm
