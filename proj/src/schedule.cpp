#include "tibpalm/schedule.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "tibpalm/errors.hpp"
#include "tibpalm/matrix_io.hpp"

namespace tibpalm {

namespace {
constexpr std::string_view kExtrapolationToken = "(k-1)/(k+2)";
}

InertialSequence InertialSequence::constant(double value) {
  if (!(value >= 0.0) || !std::isfinite(value))
    throw ConfigError("inertial coefficient must be finite and nonnegative, got " +
                      format_double(value));
  InertialSequence s;
  s.value_ = value;
  return s;
}

InertialSequence InertialSequence::extrapolation() {
  InertialSequence s;
  s.extrapolating_ = true;
  return s;
}

InertialSequence InertialSequence::parse(std::string_view token) {
  std::string compact;
  for (char c : token)
    if (c != ' ' && c != '\t') compact += c;
  if (compact == kExtrapolationToken) return extrapolation();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(compact.data(), compact.data() + compact.size(), v);
  if (compact.empty() || ec != std::errc() || ptr != compact.data() + compact.size())
    throw ConfigError("cannot parse inertial coefficient '" + std::string(token) + "'");
  return constant(v);
}

double InertialSequence::operator()(long k) const {
  if (!extrapolating_) return value_;
  return std::max(0.0, static_cast<double>(k - 1) / static_cast<double>(k + 2));
}

double InertialSequence::sup() const { return extrapolating_ ? 1.0 : value_; }

std::string InertialSequence::token() const {
  return extrapolating_ ? std::string(kExtrapolationToken) : format_double(value_);
}

InertialSchedule InertialSchedule::from_sequences(InertialSequence a1, InertialSequence a2,
                                                  InertialSequence b1, InertialSequence b2,
                                                  double rho) {
  InertialSchedule s;
  s.alpha1 = a1;
  s.alpha2 = a2;
  s.beta1 = b1;
  s.beta2 = b2;
  s.alpha1_bound = std::max(a1.sup(), b1.sup());
  s.alpha2_bound = std::max(a2.sup(), b2.sup());
  s.rho = rho;
  return s;
}

InertialSchedule InertialSchedule::constant(double a1, double a2, double b1, double b2,
                                            double rho) {
  return from_sequences(InertialSequence::constant(a1), InertialSequence::constant(a2),
                        InertialSequence::constant(b1), InertialSequence::constant(b2), rho);
}

InertialSchedule InertialSchedule::without_two_step() const {
  InertialSchedule s = *this;
  s.alpha2 = InertialSequence::constant(0.0);
  s.beta2 = InertialSequence::constant(0.0);
  s.alpha2_bound = 0.0;
  return s;
}

InertialSchedule InertialSchedule::without_inertia() const {
  InertialSchedule s = without_two_step();
  s.alpha1 = InertialSequence::constant(0.0);
  s.beta1 = InertialSequence::constant(0.0);
  s.alpha1_bound = 0.0;
  return s;
}

bool InertialSchedule::uses_extrapolation() const {
  return alpha1.is_extrapolation() || alpha2.is_extrapolation() || beta1.is_extrapolation() ||
         beta2.is_extrapolation();
}

bool InertialSchedule::within_bounds() const {
  return alpha1.sup() <= alpha1_bound && beta1.sup() <= alpha1_bound &&
         alpha2.sup() <= alpha2_bound && beta2.sup() <= alpha2_bound && alpha1_bound >= 0 &&
         alpha2_bound >= 0;
}

double validate_schedule(const InertialSchedule& s) {
  if (!(s.rho > 0))
    throw ConfigError("inadmissible schedule: rho = " + format_double(s.rho) +
                      " must be positive");
  if (!s.within_bounds())
    throw ConfigError("inadmissible schedule: an inertial sequence exceeds its bound");
  const double lhs = 2.0 * (s.alpha1_bound + s.alpha2_bound);
  const double a = (s.rho - lhs) / 2.0;
  if (!(a > 0))
    throw ConfigError("inadmissible schedule: 2(alpha1 + alpha2) = " + format_double(lhs) +
                      " >= rho = " + format_double(s.rho));
  return a;
}

}  // namespace tibpalm
