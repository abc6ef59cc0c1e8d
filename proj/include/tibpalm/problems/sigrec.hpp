#pragma once

#include <cstdint>
#include <memory>

#include "tibpalm/problem.hpp"

namespace tibpalm {

struct SignalRecoveryParams {
  double gamma = 0.2;   // penalty on ‖x − y‖²
  double mu = 2.0;      // x-kernel scale, ⟨x, (μI − AᵀA)x⟩/2
  double lambda = 1.5;  // y-kernel scale, (λ/2)‖y‖²
};

/// Sparse recovery with an L½ penalty, split as
///   L(x, y) = ½‖Ax − b‖² + (γ/2)‖x − y‖² + η Σ|yᵢ|^{1/2}.
///
/// The x block is solved exactly for quadratic kernels; with the kernel
/// ½⟨x, (μI − AᵀA)x⟩ (see sigrec_x_geometry) the solve is explicit. The y
/// block requires a Euclidean kernel and reduces to half-shrinkage.
class SignalRecoveryProblem final : public CoupledProblem {
 public:
  /// Requires ‖A‖² < μ so that μI − AᵀA is positive definite.
  SignalRecoveryProblem(Matrix a, Vector b, double eta, SignalRecoveryParams params = {},
                        Vector truth = {});

  std::string_view name() const override { return "sigrec"; }
  Index x_size() const override { return a_.cols(); }
  Index y_size() const override { return a_.cols(); }

  double f(const Vector& x) const override;
  double g(const Vector& y) const override;
  double coupling(const Vector& x, const Vector& y) const override;
  Vector coupling_grad_x(const Vector& x, const Vector& y) const override;
  Vector coupling_grad_y(const Vector& x, const Vector& y) const override;

  BlockResult solve_x(const BregmanGeometry& geom, const Vector& anchor,
                      const Vector& linear) const override;
  BlockResult solve_y(const BregmanGeometry& geom, const Vector& anchor,
                      const Vector& linear) const override;
  Vector prox_x(const Vector& point, double t) const override;
  Vector prox_y(const Vector& point, double t) const override;

  bool supports_exact_blocks(const BregmanGeometry& gx, const BregmanGeometry& gy) const override;
  BlockResult exact_x(const BregmanGeometry& geom, const Vector& y, const Vector& anchor,
                      const Vector& linear) const override;
  BlockResult exact_y(const BregmanGeometry& geom, const Vector& x, const Vector& anchor,
                      const Vector& linear) const override;

  std::optional<CouplingBounds> coupling_bounds() const override;
  void check_geometries(const BregmanGeometry& gx, const BregmanGeometry& gy) const override;
  /// The origin, for every seed.
  BlockPoint initial_point(std::uint64_t seed) const override;

  /// Kernel ⟨x, Gx⟩ with G = (μI − AᵀA)/2, i.e. D(x, x′) = ½‖x − x′‖²_{μI−AᵀA}.
  const BregmanGeometry& sigrec_x_geometry() const { return x_geom_; }
  /// (λ/2)‖y‖².
  BregmanGeometry sigrec_y_geometry() const { return BregmanGeometry::euclidean(params_.lambda); }

  const Matrix& A() const { return a_; }
  const Vector& b() const { return b_; }
  double eta() const { return eta_; }
  const SignalRecoveryParams& params() const { return params_; }
  /// Ground-truth signal when the instance was generated, empty otherwise.
  const Vector& truth() const { return truth_; }
  /// ‖A‖₂² as estimated at construction.
  double a_norm_sq() const { return a_norm_sq_; }

 private:
  /// Solves (AᵀA + tI)u = rhs for t > 0.
  Vector solve_shifted(double t, const Vector& rhs) const;
  /// Solves (AᵀA + shift·I + 2G)u = rhs for a general quadratic kernel form G.
  Vector solve_with_form(const Matrix& form, double shift, const Vector& rhs) const;
  bool is_own_x_geometry(const BregmanGeometry& g) const { return g.form() == x_geom_.form(); }

  Matrix a_;
  Vector b_;
  double eta_;
  SignalRecoveryParams params_;
  Vector truth_;
  Vector atb_;
  double a_norm_sq_;
  // AAᵀ = U diag(ev) Uᵀ, for shifted solves through the Woodbury identity.
  Matrix aat_vectors_;
  Vector aat_values_;
  BregmanGeometry x_geom_;
};

struct SignalRecoveryInstance {
  double sparsity = 0.05;  // fraction of nonzeros in the ground truth
  double noise_variance = 1e-3;
};

/// Random instance: A ∈ ℝⁿˣᵐ Gaussian rescaled to ‖A‖ ≤ 1, a ground truth
/// with ceil(sparsity·m) standard-normal entries at uniform positions,
/// b = Ax (+ ω, ω ~ N(0, σ²I) when noisy), η = 0.001‖Aᵀb‖_∞. Requires n < m.
SignalRecoveryProblem sigrec_make(Index n, Index m, std::uint64_t seed, bool noisy,
                                  SignalRecoveryParams params = {},
                                  SignalRecoveryInstance instance = {});

/// 0.001‖Aᵀb‖_∞.
double sigrec_eta(const Matrix& a, const Vector& b);

/// Closed-form x update of the two-step scheme with the sigrec kernel:
///   x_{k+1} = (1/μ)[μx_k − AᵀAx_k + Aᵀb − γ(x_k − y_k) + α₁ₖ(x_k − x_{k−1}) + α₂ₖ(x_{k−1} − x_{k−2})].
Vector sigrec_x_update(const SignalRecoveryProblem& p, const Vector& x_k, const Vector& x_km1,
                       const Vector& x_km2, const Vector& y_k, double alpha1k, double alpha2k);

/// Closed-form y update:
///   y_{k+1} = H(y_k + (1/λ)[γ(x_{k+1} − y_k) + β₁ₖ(y_k − y_{k−1}) + β₂ₖ(y_{k−1} − y_{k−2})], η/λ).
Vector sigrec_y_update(const SignalRecoveryProblem& p, const Vector& x_next, const Vector& y_k,
                       const Vector& y_km1, const Vector& y_km2, double beta1k, double beta2k);

}  // namespace tibpalm
