#include "tibpalm/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace tibpalm {

namespace {

template <class Slack, class Scale>
DescentReport check(const std::vector<IterationRecord>& records, double tol_rel, Slack slack,
                    Scale scale) {
  DescentReport out;
  if (records.size() < 2) return out;
  out.slacks.reserve(records.size() - 1);
  for (std::size_t k = 0; k + 1 < records.size(); ++k) {
    const double s = slack(records[k], records[k + 1]);
    out.slacks.push_back(s);
    if (!out.first_violation && !(s >= -tol_rel * (1.0 + std::abs(scale(records[k])))))
      out.first_violation = k;
  }
  return out;
}

}  // namespace

DescentReport sufficient_decrease_check(const std::vector<IterationRecord>& records, double a,
                                        double tol_rel) {
  return check(
      records, tol_rel,
      [a](const IterationRecord& r0, const IterationRecord& r1) {
        return r0.benefit - r1.benefit - a * r1.delta * r1.delta;
      },
      [](const IterationRecord& r) { return r.benefit; });
}

DescentReport monotonicity_check(const std::vector<IterationRecord>& records, double tol_rel) {
  return check(
      records, tol_rel,
      [](const IterationRecord& r0, const IterationRecord& r1) { return r0.benefit - r1.benefit; },
      [](const IterationRecord& r) { return r.benefit; });
}

DescentReport objective_monotonicity_check(const std::vector<IterationRecord>& records,
                                           double tol_rel) {
  return check(
      records, tol_rel,
      [](const IterationRecord& r0, const IterationRecord& r1) {
        return r0.objective - r1.objective;
      },
      [](const IterationRecord& r) { return r.objective; });
}

SummabilityReport square_summability_check(const std::vector<IterationRecord>& records, double a) {
  SummabilityReport out;
  if (records.empty()) return out;
  double min_l = records.front().objective;
  for (const auto& r : records) {
    out.sum_sq_steps += r.delta * r.delta;
    min_l = std::min(min_l, r.objective);
  }
  out.bound = (records.front().objective - min_l) / a;
  return out;
}

}  // namespace tibpalm
