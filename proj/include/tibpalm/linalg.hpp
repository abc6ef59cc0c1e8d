#pragma once

#include <Eigen/Core>

namespace tibpalm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

struct PowerIterationOptions {
  double tol = 1e-10;
  int max_iter = 10000;
};

/// Largest eigenvalue of MᵀM (the squared operator 2-norm of M), by power
/// iteration on MᵀM started from the all-ones vector. Stops once the relative
/// change of the Rayleigh quotient drops to `tol` or after `max_iter` sweeps.
/// A zero matrix returns 0 without iterating.
double spectral_norm_sq(const Matrix& m, PowerIterationOptions opts = {});

/// Rescales `a` by 1/‖a‖₂ when ‖a‖₂ > 1 so that the result is a contraction.
/// Throws InputError for a zero or non-finite matrix.
Matrix normalize_for_contraction(const Matrix& a);

bool all_finite(const Matrix& m);
bool all_finite(const Vector& v);

}  // namespace tibpalm
