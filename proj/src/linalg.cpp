#include "tibpalm/linalg.hpp"

#include <cmath>

#include "tibpalm/errors.hpp"

namespace tibpalm {

bool all_finite(const Matrix& m) { return m.allFinite(); }
bool all_finite(const Vector& v) { return v.allFinite(); }

double spectral_norm_sq(const Matrix& m, PowerIterationOptions opts) {
  if (m.size() == 0) throw InputError("spectral_norm_sq: empty matrix");
  if (!(opts.tol > 0)) throw InputError("spectral_norm_sq: tolerance must be positive");
  if (!m.allFinite()) throw InputError("spectral_norm_sq: non-finite entry");
  if ((m.array() == 0.0).all()) return 0.0;

  Vector v = Vector::Ones(m.cols());
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < opts.max_iter; ++it) {
    Vector w = m.transpose() * (m * v);
    const double next = v.dot(w);  // v has unit norm
    const double wn = w.norm();
    if (wn == 0.0) {
      // Start vector in the null space of MᵀM; restart from a basis vector.
      v.setZero();
      v(it % m.cols()) = 1.0;
      continue;
    }
    v = w / wn;
    if (std::abs(next - estimate) <= opts.tol * std::abs(next)) {
      estimate = next;
      break;
    }
    estimate = next;
  }
  // Rayleigh quotient at the final direction; never exceeds the true value.
  return std::max((m * v).squaredNorm(), 0.0);
}

Matrix normalize_for_contraction(const Matrix& a) {
  if (!a.allFinite()) throw InputError("normalize_for_contraction: non-finite entry");
  // The Rayleigh quotient approaches λmax from below, so converge tightly and
  // round the divisor up to keep the result a contraction.
  const double s = spectral_norm_sq(a, {1e-15, 100000});
  if (s == 0.0) throw InputError("normalize_for_contraction: zero matrix");
  if (s <= 1.0) return a;
  return a / (std::sqrt(s) * (1.0 + 1e-12));
}

}  // namespace tibpalm
