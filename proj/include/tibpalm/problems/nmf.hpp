#pragma once

#include <cstdint>
#include <utility>

#include "tibpalm/problem.hpp"
#include "tibpalm/prox.hpp"

namespace tibpalm {

/// Sparse nonnegative matrix factorization A ≈ XY with X ∈ ℝⁿˣʳ, Y ∈ ℝʳˣᵈ:
///   L(X, Y) = ι_{X ≥ 0, ‖Xᵢ‖₀ ≤ s}(X) + (λ/2)‖A − XY‖²_F + ι_{Y ≥ 0}(Y).
///
/// Blocks are flattened column-major, so x = vec(X) and y = vec(Y). Every
/// iteration uses Euclidean kernels whose scales are the step sizes of
/// nmf_stepsizes at the current point; the configured kernel is ignored
/// beyond requiring it to be Euclidean. f and g are indicators, so the
/// objective equals the coupling on the feasible set and +∞ elsewhere.
class SparseNmfProblem final : public CoupledProblem {
 public:
  SparseNmfProblem(Matrix a, Index rank, SparsityBudget budget = {0.25}, double lambda = 0.5);

  std::string_view name() const override { return "nmf"; }
  Index x_size() const override { return a_.rows() * rank_; }
  Index y_size() const override { return rank_ * a_.cols(); }

  double f(const Vector& x) const override;
  double g(const Vector& y) const override;
  double coupling(const Vector& x, const Vector& y) const override;
  Vector coupling_grad_x(const Vector& x, const Vector& y) const override;
  Vector coupling_grad_y(const Vector& x, const Vector& y) const override;

  BregmanGeometry x_geometry(const BregmanGeometry& configured, const Vector& x,
                             const Vector& y) const override;
  BregmanGeometry y_geometry(const BregmanGeometry& configured, const Vector& x,
                             const Vector& y) const override;

  BlockResult solve_x(const BregmanGeometry& geom, const Vector& anchor,
                      const Vector& linear) const override;
  BlockResult solve_y(const BregmanGeometry& geom, const Vector& anchor,
                      const Vector& linear) const override;
  Vector prox_x(const Vector& point, double t) const override;
  Vector prox_y(const Vector& point, double t) const override;

  void check_geometries(const BregmanGeometry& gx, const BregmanGeometry& gy) const override;
  /// X₀ uniform on [0, 1) then projected onto the sparse set, Y₀ uniform on [0, 1).
  BlockPoint initial_point(std::uint64_t seed) const override;

  Matrix X_of(const Vector& x) const;
  Matrix Y_of(const Vector& y) const;
  static Vector flatten(const Matrix& m);

  const Matrix& A() const { return a_; }
  Index rank() const { return rank_; }
  double lambda() const { return lambda_; }
  const SparsityBudget& budget() const { return budget_; }
  bool x_feasible(const Matrix& x) const;

 private:
  Matrix a_;
  Index rank_;
  SparsityBudget budget_;
  double lambda_;
};

/// (λ/2)‖A − XY‖²_F.
double nmf_objective(const Matrix& a, const Matrix& x, const Matrix& y, double lambda);
/// λ(XY − A)Yᵀ.
Matrix nmf_grad_x(const Matrix& a, const Matrix& x, const Matrix& y, double lambda);
/// λXᵀ(XY − A).
Matrix nmf_grad_y(const Matrix& a, const Matrix& x, const Matrix& y, double lambda);

/// Step sizes μ₁ = 1.01·λ·λmax(YYᵀ) and μ₂ = 1.01·λ·λmax(XᵀX), floored at 1e-8.
std::pair<double, double> nmf_stepsizes(const Matrix& x, const Matrix& y, double lambda);

/// Projected gradient step X⁺ = P_sparse(X_anchor − (∇X + inertial)/μ₁), column by column.
Matrix nmf_x_update(const Matrix& anchor, const Matrix& step_direction, double mu1,
                    const SparsityBudget& budget);
/// Y⁺ = max(Y_anchor − (∇Y + inertial)/μ₂, 0).
Matrix nmf_y_update(const Matrix& anchor, const Matrix& step_direction, double mu2);

/// Synthetic instance A = WH with W ∈ ℝⁿˣʳ nonnegative, each column holding
/// ceil(sparsity·n) uniform [0, 1) entries at random rows, and H ∈ ℝʳˣᵈ
/// uniform on [0, 1).
Matrix nmf_synthetic(Index rows, Index cols, Index rank, double sparsity, std::uint64_t seed);

}  // namespace tibpalm
