#include "tibpalm/problem.hpp"

#include <algorithm>
#include <string>

#include "tibpalm/errors.hpp"

namespace tibpalm {

BregmanGeometry CoupledProblem::x_geometry(const BregmanGeometry& configured, const Vector&,
                                           const Vector&) const {
  return configured;
}

BregmanGeometry CoupledProblem::y_geometry(const BregmanGeometry& configured, const Vector&,
                                           const Vector&) const {
  return configured;
}

Vector CoupledProblem::prox_x(const Vector& point, double t) const {
  return solve_x(BregmanGeometry::euclidean(t), point, Vector::Zero(point.size())).value;
}

Vector CoupledProblem::prox_y(const Vector& point, double t) const {
  return solve_y(BregmanGeometry::euclidean(t), point, Vector::Zero(point.size())).value;
}

bool CoupledProblem::supports_exact_blocks(const BregmanGeometry&, const BregmanGeometry&) const {
  return false;
}

BlockResult CoupledProblem::exact_x(const BregmanGeometry&, const Vector&, const Vector&,
                                    const Vector&) const {
  throw ConfigError(std::string(name()) + ": no exact x-block minimizer");
}

BlockResult CoupledProblem::exact_y(const BregmanGeometry&, const Vector&, const Vector&,
                                    const Vector&) const {
  throw ConfigError(std::string(name()) + ": no exact y-block minimizer");
}

void CoupledProblem::check_geometries(const BregmanGeometry&, const BregmanGeometry&) const {}

std::optional<double> admissibility_margin(const CoupledProblem& problem,
                                           const BregmanGeometry& gx,
                                           const BregmanGeometry& gy) {
  const auto bounds = problem.coupling_bounds();
  if (!bounds) return std::nullopt;
  const auto box = problem.operating_box();
  return std::min(gx.theta(box) - bounds->x, gy.theta(box) - bounds->y);
}

}  // namespace tibpalm
