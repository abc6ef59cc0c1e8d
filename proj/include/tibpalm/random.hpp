#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "tibpalm/linalg.hpp"

namespace tibpalm {

/// Deterministic random source used for every generated instance.
///
/// Bits come from std::mt19937_64 (whose output sequence is fixed by the C++
/// standard). Uniform doubles take the top 53 bits; standard normals use the
/// Box–Muller transform, returning both variates of each pair in order. The
/// std::*_distribution adaptors are avoided because their output is
/// implementation-defined, which would make traces differ between toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal.
  double normal();
  /// Uniform integer in [0, n).
  std::uint64_t index(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// rows×cols matrix of i.i.d. standard normals, filled row by row from Rng(seed).
Matrix gaussian_matrix(Index rows, Index cols, std::uint64_t seed);
/// Same fill order, drawing from an existing stream.
Matrix gaussian_matrix(Index rows, Index cols, Rng& rng);

}  // namespace tibpalm
