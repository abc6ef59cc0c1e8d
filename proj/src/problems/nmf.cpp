#include "tibpalm/problems/nmf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "tibpalm/errors.hpp"
#include "tibpalm/random.hpp"

namespace tibpalm {

namespace {

constexpr double kStepFloor = 1e-8;
constexpr double kStepSafety = 1.01;

void require_euclidean(const BregmanGeometry& g, const char* block) {
  if (g.kind() != BregmanGeometry::Kind::Euclidean)
    throw ConfigError(std::string("nmf: ") + block + " geometry must be euclid, got " +
                      std::string(g.token()));
}

}  // namespace

SparseNmfProblem::SparseNmfProblem(Matrix a, Index rank, SparsityBudget budget, double lambda)
    : a_(std::move(a)), rank_(rank), budget_(budget), lambda_(lambda) {
  if (a_.size() == 0) throw InputError("nmf: empty data matrix");
  if (!all_finite(a_)) throw InputError("nmf: non-finite data");
  if (rank_ <= 0) throw InputError("nmf: rank must be positive");
  if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) throw InputError("nmf: lambda must be positive");
  budget_.validate();
}

Matrix SparseNmfProblem::X_of(const Vector& x) const {
  if (x.size() != x_size()) throw InputError("nmf: x has the wrong length");
  return Eigen::Map<const Matrix>(x.data(), a_.rows(), rank_);
}

Matrix SparseNmfProblem::Y_of(const Vector& y) const {
  if (y.size() != y_size()) throw InputError("nmf: y has the wrong length");
  return Eigen::Map<const Matrix>(y.data(), rank_, a_.cols());
}

Vector SparseNmfProblem::flatten(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

bool SparseNmfProblem::x_feasible(const Matrix& x) const {
  if ((x.array() < 0.0).any()) return false;
  const Index keep = budget_.keep(x.rows());
  for (Index j = 0; j < x.cols(); ++j)
    if ((x.col(j).array() != 0.0).count() > keep) return false;
  return true;
}

double SparseNmfProblem::f(const Vector& x) const {
  return x_feasible(X_of(x)) ? 0.0 : std::numeric_limits<double>::infinity();
}

double SparseNmfProblem::g(const Vector& y) const {
  return (y.array() < 0.0).any() ? std::numeric_limits<double>::infinity() : 0.0;
}

double SparseNmfProblem::coupling(const Vector& x, const Vector& y) const {
  return nmf_objective(a_, X_of(x), Y_of(y), lambda_);
}

Vector SparseNmfProblem::coupling_grad_x(const Vector& x, const Vector& y) const {
  return flatten(nmf_grad_x(a_, X_of(x), Y_of(y), lambda_));
}

Vector SparseNmfProblem::coupling_grad_y(const Vector& x, const Vector& y) const {
  return flatten(nmf_grad_y(a_, X_of(x), Y_of(y), lambda_));
}

BregmanGeometry SparseNmfProblem::x_geometry(const BregmanGeometry& configured, const Vector& x,
                                             const Vector& y) const {
  require_euclidean(configured, "x");
  return BregmanGeometry::euclidean(nmf_stepsizes(X_of(x), Y_of(y), lambda_).first);
}

BregmanGeometry SparseNmfProblem::y_geometry(const BregmanGeometry& configured, const Vector& x,
                                             const Vector& y) const {
  require_euclidean(configured, "y");
  return BregmanGeometry::euclidean(nmf_stepsizes(X_of(x), Y_of(y), lambda_).second);
}

BlockResult SparseNmfProblem::solve_x(const BregmanGeometry& geom, const Vector& anchor,
                                      const Vector& linear) const {
  require_euclidean(geom, "x");
  return {flatten(nmf_x_update(X_of(anchor), X_of(linear), geom.scale(), budget_))};
}

BlockResult SparseNmfProblem::solve_y(const BregmanGeometry& geom, const Vector& anchor,
                                      const Vector& linear) const {
  require_euclidean(geom, "y");
  return {flatten(nmf_y_update(Y_of(anchor), Y_of(linear), geom.scale()))};
}

Vector SparseNmfProblem::prox_x(const Vector& point, double) const {
  return flatten(project_sparse_nonneg_columns(X_of(point), budget_));
}

Vector SparseNmfProblem::prox_y(const Vector& point, double) const {
  return project_nonneg(point);
}

void SparseNmfProblem::check_geometries(const BregmanGeometry& gx,
                                        const BregmanGeometry& gy) const {
  require_euclidean(gx, "x");
  require_euclidean(gy, "y");
}

BlockPoint SparseNmfProblem::initial_point(std::uint64_t seed) const {
  Rng rng(seed);
  Matrix x(a_.rows(), rank_);
  for (Index j = 0; j < x.cols(); ++j)
    for (Index i = 0; i < x.rows(); ++i) x(i, j) = rng.uniform();
  Matrix y(rank_, a_.cols());
  for (Index j = 0; j < y.cols(); ++j)
    for (Index i = 0; i < y.rows(); ++i) y(i, j) = rng.uniform();
  return {flatten(project_sparse_nonneg_columns(x, budget_)), flatten(y)};
}

double nmf_objective(const Matrix& a, const Matrix& x, const Matrix& y, double lambda) {
  return 0.5 * lambda * (a - x * y).squaredNorm();
}

Matrix nmf_grad_x(const Matrix& a, const Matrix& x, const Matrix& y, double lambda) {
  return lambda * ((x * y - a) * y.transpose());
}

Matrix nmf_grad_y(const Matrix& a, const Matrix& x, const Matrix& y, double lambda) {
  return lambda * (x.transpose() * (x * y - a));
}

std::pair<double, double> nmf_stepsizes(const Matrix& x, const Matrix& y, double lambda) {
  const double mu1 = kStepSafety * lambda * spectral_norm_sq(y.transpose());
  const double mu2 = kStepSafety * lambda * spectral_norm_sq(x);
  return {std::max(mu1, kStepFloor), std::max(mu2, kStepFloor)};
}

Matrix nmf_x_update(const Matrix& anchor, const Matrix& step_direction, double mu1,
                    const SparsityBudget& budget) {
  return project_sparse_nonneg_columns(anchor - step_direction / mu1, budget);
}

Matrix nmf_y_update(const Matrix& anchor, const Matrix& step_direction, double mu2) {
  return (anchor - step_direction / mu2).cwiseMax(0.0);
}

Matrix nmf_synthetic(Index rows, Index cols, Index rank, double sparsity, std::uint64_t seed) {
  if (rows <= 0 || cols <= 0 || rank <= 0) throw InputError("nmf: dimensions must be positive");
  const SparsityBudget budget{sparsity};
  budget.validate();
  Rng rng(seed);
  const Index keep = budget.keep(rows);
  Matrix w = Matrix::Zero(rows, rank);
  std::vector<Index> order(static_cast<std::size_t>(rows));
  for (Index j = 0; j < rank; ++j) {
    std::iota(order.begin(), order.end(), Index{0});
    for (Index i = 0; i < keep; ++i) {
      const auto pick = i + static_cast<Index>(rng.index(static_cast<std::uint64_t>(rows - i)));
      std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(pick)]);
      w(order[static_cast<std::size_t>(i)], j) = rng.uniform();
    }
  }
  Matrix h(rank, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rank; ++i) h(i, j) = rng.uniform();
  return w * h;
}

}  // namespace tibpalm
