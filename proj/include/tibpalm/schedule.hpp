#pragma once

#include <string>
#include <string_view>

namespace tibpalm {

/// One inertial coefficient sequence: a constant, or the extrapolation
/// max(0, (k−1)/(k+2)).
class InertialSequence {
 public:
  InertialSequence() = default;

  static InertialSequence constant(double value);
  static InertialSequence extrapolation();
  /// Parses a number or the token "(k-1)/(k+2)".
  static InertialSequence parse(std::string_view token);

  double operator()(long k) const;
  /// Supremum over k ≥ 0.
  double sup() const;
  bool is_zero() const { return !extrapolating_ && value_ == 0.0; }
  bool is_extrapolation() const { return extrapolating_; }
  /// Canonical text form, inverse of parse().
  std::string token() const;

 private:
  double value_ = 0.0;
  bool extrapolating_ = false;
};

/// The four inertial sequences of the two-step scheme. α-sequences act on the
/// x block, β-sequences on the y block; index 1 is the one-step term
/// (z_k − z_{k−1}) and index 2 the two-step term (z_{k−1} − z_{k−2}).
struct InertialSchedule {
  InertialSequence alpha1;
  InertialSequence alpha2;
  InertialSequence beta1;
  InertialSequence beta2;
  /// Bounds with alpha1k, beta1k ∈ [0, alpha1_bound] and alpha2k, beta2k ∈ [0, alpha2_bound].
  double alpha1_bound = 0.0;
  double alpha2_bound = 0.0;
  /// Admissibility margin min{θ₁ − L₁⁺, θ₂ − L₂⁺} supplied by the problem.
  double rho = 0.0;

  /// Constant sequences; bounds are the tightest ones (max of each pair).
  static InertialSchedule constant(double a1, double a2, double b1, double b2, double rho);
  /// Builds a schedule with the tightest bounds for the given sequences.
  static InertialSchedule from_sequences(InertialSequence a1, InertialSequence a2,
                                         InertialSequence b1, InertialSequence b2, double rho);
  static InertialSchedule none(double rho) { return constant(0, 0, 0, 0, rho); }

  /// Copy with both two-step sequences set to zero.
  InertialSchedule without_two_step() const;
  /// Copy with every sequence set to zero.
  InertialSchedule without_inertia() const;

  bool uses_extrapolation() const;
  /// True iff every sequence stays inside its declared bound.
  bool within_bounds() const;
};

/// Returns a = (ρ − 2(α₁ + α₂))/2 when positive. Throws ConfigError naming the
/// violated inequality when 2(α₁ + α₂) ≥ ρ, when ρ ≤ 0, or when a sequence
/// leaves its bound.
double validate_schedule(const InertialSchedule& s);

}  // namespace tibpalm
