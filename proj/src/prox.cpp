#include "tibpalm/prox.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "tibpalm/errors.hpp"

namespace tibpalm {

void SparsityBudget::validate() const {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw InputError("sparsity fraction must lie in (0, 1]");
}

Index SparsityBudget::keep(Index length) const {
  validate();
  const auto k = static_cast<Index>(std::ceil(fraction * static_cast<double>(length)));
  return std::clamp<Index>(k, 1, std::max<Index>(length, 1));
}

// For ½(t − a)² + κ|t|^{1/2} the nonzero stationary branch is the cubic root
//   t = (2a/3)(1 + cos(2π/3 − (2/3)·arccos((κ/4)(|a|/3)^{-3/2}))),
// which beats t = 0 exactly when |a| > (3/2)κ^{2/3}. At equality both are
// minimizers and 0 is returned.
double half_shrinkage_threshold(double kappa) {
  return 1.5 * std::cbrt(kappa * kappa);
}

double half_shrinkage(double a, double kappa) {
  if (!(kappa > 0)) throw InputError("half_shrinkage: kappa must be positive");
  const double mag = std::abs(a);
  if (mag <= half_shrinkage_threshold(kappa)) return 0.0;
  const double arg = (kappa / 4.0) * std::pow(mag / 3.0, -1.5);
  const double angle = std::acos(std::min(arg, 1.0));
  return (2.0 * a / 3.0) * (1.0 + std::cos(2.0 * std::numbers::pi / 3.0 - 2.0 * angle / 3.0));
}

Vector half_shrinkage(const Vector& a, double kappa) {
  if (!(kappa > 0)) throw InputError("half_shrinkage: kappa must be positive");
  Vector out(a.size());
  for (Index i = 0; i < a.size(); ++i) out(i) = half_shrinkage(a(i), kappa);
  return out;
}

Vector project_box(const Vector& v, double lo, double hi) {
  if (!(lo <= hi)) throw InputError("project_box: lo must not exceed hi");
  return v.cwiseMax(lo).cwiseMin(hi);
}

Vector project_nonneg(const Vector& v) { return v.cwiseMax(0.0); }

Vector project_sparse_nonneg(const Vector& col, const SparsityBudget& budget) {
  const Index k = budget.keep(col.size());
  Vector out = Vector::Zero(col.size());
  if (k >= col.size()) return project_nonneg(col);

  std::vector<Index> order(static_cast<std::size_t>(col.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](Index i, Index j) {
    return col(i) > col(j) || (col(i) == col(j) && i < j);
  });
  for (Index t = 0; t < k; ++t) {
    const Index i = order[static_cast<std::size_t>(t)];
    if (col(i) > 0.0) out(i) = col(i);
  }
  return out;
}

Matrix project_sparse_nonneg_columns(const Matrix& m, const SparsityBudget& budget) {
  Matrix out(m.rows(), m.cols());
  for (Index j = 0; j < m.cols(); ++j) out.col(j) = project_sparse_nonneg(m.col(j), budget);
  return out;
}

}  // namespace tibpalm
