#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "tibpalm/linalg.hpp"

namespace tibpalm {

/// Closed coordinate box [lo, hi]^m used to localize curvature constants.
struct Box {
  double lo = 0.0;
  double hi = 0.0;
};

/// Smallest entry a KL/IS point may have and still count as interior.
inline constexpr double kPositiveFloor = 1e-12;

/// A separable (or quadratic) Legendre kernel φ together with the pieces the
/// block solvers need: ∇φ, (∇φ)⁻¹, and curvature bounds.
///
/// Kernels, with scale μ > 0:
///   euclid       φ(x) = (μ/2)‖x‖²          on ℝᵐ
///   kl           φ(x) = μ Σ xᵢ ln xᵢ       on xᵢ > 0
///   is           φ(x) = −μ Σ ln xᵢ         on xᵢ > 0
///   mahalanobis  φ(x) = ⟨x, Mx⟩            on ℝᵐ, M symmetric positive definite
///
/// KL and IS are only strongly convex on bounded boxes, so their theta()
/// takes the operating box (θ_KL = μ/hi, θ_IS = μ/hi²); without a box they
/// report 0. Instances are immutable and cheap to copy.
class BregmanGeometry {
 public:
  enum class Kind { Euclidean, KullbackLeibler, ItakuraSaito, Mahalanobis };

  static BregmanGeometry euclidean(double mu);
  static BregmanGeometry kl(double mu);
  static BregmanGeometry itakura_saito(double mu);
  /// Throws InputError if `m` is not symmetric positive definite.
  static BregmanGeometry mahalanobis(const Matrix& m);

  /// Builds a geometry from its CLI token ("euclid", "kl", "is"). The
  /// "mahalanobis" token needs a matrix and is resolved by the caller.
  static BregmanGeometry from_token(std::string_view token, double mu);

  Kind kind() const { return kind_; }
  std::string_view token() const;
  /// μ for separable kernels; 0 for Mahalanobis.
  double scale() const { return mu_; }

  double phi(const Vector& x) const;
  Vector grad(const Vector& x) const;
  /// Inverse of grad on its range; throws DomainError outside it.
  Vector inv_grad(const Vector& v) const;

  bool in_domain(const Vector& x) const;
  /// Throws DomainError naming the first coordinate outside int dom φ.
  void check_domain(const Vector& x) const;
  /// True iff v lies in the range of ∇φ (so inv_grad(v) is defined).
  bool in_grad_range(const Vector& v) const;

  /// Strong-convexity modulus on `box` (or globally when no box is given).
  double theta(std::optional<Box> box = std::nullopt) const;
  /// Lipschitz constant of ∇φ on `box`; +∞ when unbounded.
  double grad_lipschitz(std::optional<Box> box = std::nullopt) const;

  /// Quadratic form M of a Mahalanobis kernel, nullptr otherwise. The pointer
  /// identifies the form: copies of one geometry share it.
  const Matrix* form() const;

 private:
  struct QuadraticData;

  BregmanGeometry(Kind kind, double mu, std::shared_ptr<const QuadraticData> quad)
      : kind_(kind), mu_(mu), quad_(std::move(quad)) {}

  Kind kind_;
  double mu_;
  std::shared_ptr<const QuadraticData> quad_;
};

/// D_φ(x, y) = φ(x) − φ(y) − ⟨∇φ(y), x − y⟩, evaluated through each kernel's
/// closed form so that the result is nonnegative up to rounding.
double bregman_distance(const BregmanGeometry& geom, const Vector& x, const Vector& y);

}  // namespace tibpalm
