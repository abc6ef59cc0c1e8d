#include "tibpalm/random.hpp"

#include <cmath>
#include <numbers>

#include "tibpalm/errors.hpp"

namespace tibpalm {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (spare_) {
    const double z = *spare_;
    spare_.reset();
    return z;
  }
  double u1 = uniform();
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  return r * std::cos(t);
}

std::uint64_t Rng::index(std::uint64_t n) {
  if (n == 0) throw InputError("Rng::index: empty range");
  // Rejection sampling keeps the result exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return r % n;
}

Matrix gaussian_matrix(Index rows, Index cols, Rng& rng) {
  if (rows < 1 || cols < 1) throw InputError("gaussian_matrix: sizes must be positive");
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

Matrix gaussian_matrix(Index rows, Index cols, std::uint64_t seed) {
  Rng rng(seed);
  return gaussian_matrix(rows, cols, rng);
}

}  // namespace tibpalm
