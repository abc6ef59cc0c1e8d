#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tibpalm/engine.hpp"
#include "tibpalm/schedule.hpp"

namespace tibpalm::bench {

enum class ProblemKind { Nmf, Sigrec, Qfp };

/// "nmf", "sigrec", "qfp"; throws ConfigError otherwise.
ProblemKind parse_problem_kind(std::string_view name);
std::string_view problem_kind_name(ProblemKind kind);

/// A named constant or extrapolation schedule, before ρ is known.
struct ScheduleSpec {
  std::string name;
  InertialSequence alpha1, alpha2, beta1, beta2;
};

/// Kernel pair indices of the QFP family: 1 = kl, 2 = is, 3 = euclid.
struct GeometryPair {
  int x = 3;
  int y = 3;
  std::string label() const;  // e.g. "g12"
  friend bool operator==(const GeometryPair&, const GeometryPair&) = default;
};

/// Geometry token for a QFP index (1 → "kl", 2 → "is", 3 → "euclid").
std::string_view qfp_geometry_token(int index);

struct RunConfig {
  ProblemKind kind = ProblemKind::Sigrec;

  std::vector<Variant> variants;
  // Inertial coefficients; nullopt means the per-variant default.
  std::optional<InertialSequence> alpha1, alpha2, beta1, beta2;
  double tol = 1e-4;
  long max_iter = 20000;
  std::uint64_t seed = 1;
  int repetitions = 10;
  std::string out = "results";
  bool override_theory = false;
  bool timing = true;

  // sigrec
  long n = 40;
  long m = 200;
  bool noisy = false;
  double gamma = 0.2;
  double mu = 2.0;
  double lambda = 1.5;
  double sparsity = 0.05;
  double noise_variance = 1e-3;
  std::string geometry_x = "mahalanobis";

  // nmf (lambda and sparsity are shared keys with their own defaults)
  long rows = 60;
  long cols = 40;
  long rank = 10;
  std::string data;  // matrix file; empty means synthetic

  // qfp (gamma and mu are shared keys with their own defaults)
  std::string instance = "problem1";  // "problem1", "random" or a matrix file
  long dim = 5;
  double c = -2.0;
  double d = 20.0;
  double box_lo = 1.0;
  double box_hi = 3.0;
  std::vector<GeometryPair> geometry_pairs;
  std::vector<std::string> schedules;  // "one-step", "two-step"
  double inner_tol = 1e-8;
  long inner_max_iter = 500;

  friend bool operator==(const RunConfig&, const RunConfig&);
};

/// Defaults for a problem kind, following the published experiment settings.
RunConfig default_config(ProblemKind kind);

/// Parses a whole config file. Sections "[nmf]", "[sigrec]" and "[qfp]" hold
/// "key = value" lines; '#' starts a comment. Absent sections get defaults.
/// Unknown sections or keys, malformed values and schedules that can never
/// be admissible (unless override_theory is set) throw ConfigError.
std::map<ProblemKind, RunConfig> parse_config_file(std::string_view text);

/// The section for `kind` of a config file, defaults if absent.
RunConfig parse_config(std::string_view text, ProblemKind kind);

/// Canonical text of one section; parse_config(emit_config(c), c.kind) == c.
std::string emit_config(const RunConfig& config);

/// Throws ConfigError when an explicit constant schedule violates
/// 2(α₁ + α₂) < ρ for every instance the config can produce and
/// override_theory is off.
void check_admissibility(const RunConfig& config);

/// The named schedule specs a config runs for `variant`.
///   sigrec: every sequence 0.99ρ/4 for the two-step schemes, α₁ = β₁ = 0.99ρ/2
///           for the one-step inertial schemes;
///   nmf:    0.2 / 0.3 (two-step), 0.5 (one-step inertial);
///   qfp:    the configured schedule list ("one-step": 0.5, "two-step": 0.2 / 0.3).
/// Explicit alpha/beta keys replace the defaults with a single "custom" spec;
/// alpha1 (alpha2) also sets beta1 (beta2) unless the beta key is given.
/// `rho` is the instance's margin (used by sigrec's defaults only).
std::vector<ScheduleSpec> schedule_specs(const RunConfig& config, Variant variant, double rho);

InertialSchedule realize(const ScheduleSpec& spec, double rho);

}  // namespace tibpalm::bench
