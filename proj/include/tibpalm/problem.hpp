#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>

#include "tibpalm/bregman.hpp"
#include "tibpalm/linalg.hpp"

namespace tibpalm {

/// A point z = (x, y) of the two-block problem.
struct BlockPoint {
  Vector x;
  Vector y;
};

/// Solution of one block subproblem with the number of inner iterations
/// spent (1 for closed forms).
struct BlockResult {
  Vector value;
  int inner = 1;
};

/// Upper bounds L₁⁺, L₂⁺ on the Lipschitz moduli of ∇ₓQ(·, y) and ∇ᵧQ(x, ·).
struct CouplingBounds {
  double x = 0.0;
  double y = 0.0;
};

/// The model L(x, y) = f(x) + Q(x, y) + g(y), with f and g possibly nonsmooth
/// and Q smooth, plus the block subproblem solvers the iteration needs.
///
/// The Bregman-linearized subproblems are
///   solve_x:  argmin_u  f(u) + ⟨u, c⟩ + D_φ(u, anchor)
///   solve_y:  argmin_v  g(v) + ⟨v, c⟩ + D_φ(v, anchor)
/// where c already includes ∇Q at the linearization point and the inertial
/// terms. Solvers throw DomainError when they cannot stay in the domain.
class CoupledProblem {
 public:
  virtual ~CoupledProblem() = default;

  virtual std::string_view name() const = 0;
  virtual Index x_size() const = 0;
  virtual Index y_size() const = 0;

  virtual double f(const Vector& x) const = 0;
  virtual double g(const Vector& y) const = 0;
  virtual double coupling(const Vector& x, const Vector& y) const = 0;
  virtual Vector coupling_grad_x(const Vector& x, const Vector& y) const = 0;
  virtual Vector coupling_grad_y(const Vector& x, const Vector& y) const = 0;

  double objective(const Vector& x, const Vector& y) const {
    return f(x) + coupling(x, y) + g(y);
  }
  double objective(const BlockPoint& z) const { return objective(z.x, z.y); }

  /// Kernel used for the x (resp. y) update linearized at (x, y). Problems
  /// with iterate-dependent step sizes override these; the default returns
  /// the configured geometry.
  virtual BregmanGeometry x_geometry(const BregmanGeometry& configured, const Vector& x,
                                     const Vector& y) const;
  virtual BregmanGeometry y_geometry(const BregmanGeometry& configured, const Vector& x,
                                     const Vector& y) const;

  virtual BlockResult solve_x(const BregmanGeometry& geom, const Vector& anchor,
                              const Vector& linear) const = 0;
  virtual BlockResult solve_y(const BregmanGeometry& geom, const Vector& anchor,
                              const Vector& linear) const = 0;

  /// Euclidean proximal maps argmin_u f(u) + (t/2)‖u − point‖². The defaults
  /// delegate to solve_x / solve_y with a Euclidean kernel of scale t.
  virtual Vector prox_x(const Vector& point, double t) const;
  virtual Vector prox_y(const Vector& point, double t) const;

  /// Exact block minimizers used by alternating minimization:
  ///   exact_x: argmin_u f(u) + Q(u, y) + D_φ(u, anchor) + ⟨u, linear⟩
  ///   exact_y: argmin_v g(v) + Q(x, v) + D_φ(v, anchor) + ⟨v, linear⟩
  /// Only available when supports_exact_blocks() says so.
  virtual bool supports_exact_blocks(const BregmanGeometry& gx, const BregmanGeometry& gy) const;
  virtual BlockResult exact_x(const BregmanGeometry& geom, const Vector& y, const Vector& anchor,
                              const Vector& linear) const;
  virtual BlockResult exact_y(const BregmanGeometry& geom, const Vector& x, const Vector& anchor,
                              const Vector& linear) const;

  /// L₁⁺, L₂⁺ over the operating region, when the problem can bound them.
  virtual std::optional<CouplingBounds> coupling_bounds() const { return std::nullopt; }
  /// Box on which KL/IS curvature constants are evaluated.
  virtual std::optional<Box> operating_box() const { return std::nullopt; }

  /// Throws ConfigError if the solvers cannot handle this kernel pair.
  virtual void check_geometries(const BregmanGeometry& gx, const BregmanGeometry& gy) const;

  /// Deterministic starting point for a given seed.
  virtual BlockPoint initial_point(std::uint64_t seed) const = 0;
};

/// ρ = min{θ₁ − L₁⁺, θ₂ − L₂⁺} for a kernel pair on the problem's operating
/// box, or nullopt when the problem provides no coupling bounds.
std::optional<double> admissibility_margin(const CoupledProblem& problem,
                                           const BregmanGeometry& gx,
                                           const BregmanGeometry& gy);

}  // namespace tibpalm
