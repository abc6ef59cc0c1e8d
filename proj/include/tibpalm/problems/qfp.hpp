#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "tibpalm/problem.hpp"

namespace tibpalm {

/// Data of f(x) = (xᵀMx + aᵀx + c) / (bᵀx + d).
struct QfpData {
  Matrix M;
  Vector a;
  Vector b;
  double c = -2.0;
  double d = 20.0;
};

struct QfpInnerOptions {
  double tol = 1e-8;   // relative to 1 + ‖∇φ(anchor)‖
  int max_iter = 500;
  int max_halvings = 40;
};

/// Quadratic fractional program over a box, split as
///   L(x, y) = f(x) + (γ/2)‖x − y‖² + ι_{[lo, hi]ᵐ}(y).
///
/// The x block runs a damped mirror fixed-point iteration
///   ∇φ(x⁺) = ∇φ(anchor) − ∇f(x) − c,
/// halving the step in mirror space whenever the stationarity residual does
/// not decrease or the trial point leaves the domain. The y block is solved
/// exactly coordinate by coordinate, so its kernel must be separable.
class QfpProblem final : public CoupledProblem {
 public:
  /// Throws InputError unless bᵀx + d > 0 on the whole box.
  QfpProblem(QfpData data, double gamma = 10.0, Box box = {1.0, 3.0}, QfpInnerOptions inner = {});

  std::string_view name() const override { return "qfp"; }
  Index x_size() const override { return data_.M.rows(); }
  Index y_size() const override { return data_.M.rows(); }

  double f(const Vector& x) const override;
  double g(const Vector& y) const override;
  double coupling(const Vector& x, const Vector& y) const override;
  Vector coupling_grad_x(const Vector& x, const Vector& y) const override;
  Vector coupling_grad_y(const Vector& x, const Vector& y) const override;

  BlockResult solve_x(const BregmanGeometry& geom, const Vector& anchor,
                      const Vector& linear) const override;
  BlockResult solve_y(const BregmanGeometry& geom, const Vector& anchor,
                      const Vector& linear) const override;

  std::optional<CouplingBounds> coupling_bounds() const override;
  std::optional<Box> operating_box() const override { return box_; }
  void check_geometries(const BregmanGeometry& gx, const BregmanGeometry& gy) const override;
  /// x₀ and y₀ independently uniform on the box.
  BlockPoint initial_point(std::uint64_t seed) const override;

  /// f and its quotient-rule gradient; DomainError when bᵀx + d ≤ 0.
  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  /// min over box vertices of bᵀx + d.
  double min_vertex_denominator() const;
  double denominator(const Vector& x) const { return data_.b.dot(x) + data_.d; }

  const QfpData& data() const { return data_; }
  double gamma() const { return gamma_; }
  const Box& box() const { return box_; }

 private:
  double x_residual(const Vector& x, const Vector& grad_phi_x, const Vector& target) const;

  QfpData data_;
  Matrix sym_;  // (M + Mᵀ)/2
  double gamma_;
  Box box_;
  QfpInnerOptions inner_;
};

/// Σᵢ min(bᵢ·lo, bᵢ·hi) + d.
double qfp_min_vertex_denominator(const Vector& b, double d, const Box& box);

/// Location of the bundled fixed instance.
std::filesystem::path qfp_problem1_path();

/// Reads a (m + 2)×m matrix file: rows 0..m−1 hold M, row m holds a, row
/// m + 1 holds b. c and d keep their defaults.
QfpData qfp_load(const std::filesystem::path& path);

/// Random instance of dimension m: M = GᵀG/m with G standard normal,
/// a standard normal, b uniform on [−1, 1] rescaled when needed so that the
/// smallest denominator over the box is at least d/2.
QfpData qfp_random(Index m, std::uint64_t seed);

}  // namespace tibpalm
