#include "tibpalm/problems/qfp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tibpalm/errors.hpp"
#include "tibpalm/matrix_io.hpp"
#include "tibpalm/random.hpp"

#ifndef TIBPALM_DATA_DIR
#define TIBPALM_DATA_DIR "data"
#endif

namespace tibpalm {

namespace {

bool separable(const BregmanGeometry& g) {
  return g.kind() != BregmanGeometry::Kind::Mahalanobis;
}

// Value of v ↦ c·v + D_φ(v, anchor) for one coordinate.
double scalar_objective(const BregmanGeometry& g, double v, double anchor, double c) {
  Vector pv(1), pa(1);
  pv(0) = v;
  pa(0) = anchor;
  return c * v + bregman_distance(g, pv, pa);
}

}  // namespace

QfpProblem::QfpProblem(QfpData data, double gamma, Box box, QfpInnerOptions inner)
    : data_(std::move(data)), gamma_(gamma), box_(box), inner_(inner) {
  const Index m = data_.M.rows();
  if (m == 0 || data_.M.cols() != m) throw InputError("qfp: M must be a nonempty square matrix");
  if (data_.a.size() != m || data_.b.size() != m) throw InputError("qfp: a and b must match M");
  if (!all_finite(data_.M) || !all_finite(data_.a) || !all_finite(data_.b) ||
      !std::isfinite(data_.c) || !std::isfinite(data_.d))
    throw InputError("qfp: non-finite data");
  if (!(gamma_ > 0.0) || !std::isfinite(gamma_)) throw InputError("qfp: gamma must be positive");
  if (!(box_.lo < box_.hi) || !std::isfinite(box_.lo) || !std::isfinite(box_.hi))
    throw InputError("qfp: box needs lo < hi");
  if (!(inner_.tol > 0.0) || inner_.max_iter < 1) throw InputError("qfp: bad inner options");
  const double dmin = qfp_min_vertex_denominator(data_.b, data_.d, box_);
  if (!(dmin > 0.0))
    throw InputError("qfp: denominator is not positive on the whole box (min vertex value " +
                     format_double(dmin) + ")");
  sym_ = 0.5 * (data_.M + data_.M.transpose());
}

double QfpProblem::value(const Vector& x) const {
  const double den = denominator(x);
  if (!(den > 0.0)) throw DomainError("qfp: denominator b'x + d is not positive");
  return (x.dot(data_.M * x) + data_.a.dot(x) + data_.c) / den;
}

Vector QfpProblem::gradient(const Vector& x) const {
  const double den = denominator(x);
  if (!(den > 0.0)) throw DomainError("qfp: denominator b'x + d is not positive");
  const double num = x.dot(data_.M * x) + data_.a.dot(x) + data_.c;
  return ((2.0 * (sym_ * x) + data_.a) * den - num * data_.b) / (den * den);
}

double QfpProblem::min_vertex_denominator() const {
  return qfp_min_vertex_denominator(data_.b, data_.d, box_);
}

double QfpProblem::f(const Vector& x) const {
  if (!(denominator(x) > 0.0)) return std::numeric_limits<double>::infinity();
  return value(x);
}

double QfpProblem::g(const Vector& y) const {
  const bool inside = (y.array() >= box_.lo).all() && (y.array() <= box_.hi).all();
  return inside ? 0.0 : std::numeric_limits<double>::infinity();
}

double QfpProblem::coupling(const Vector& x, const Vector& y) const {
  return 0.5 * gamma_ * (x - y).squaredNorm();
}

Vector QfpProblem::coupling_grad_x(const Vector& x, const Vector& y) const {
  return gamma_ * (x - y);
}

Vector QfpProblem::coupling_grad_y(const Vector& x, const Vector& y) const {
  return gamma_ * (y - x);
}

double QfpProblem::x_residual(const Vector& x, const Vector& grad_phi_x,
                              const Vector& target) const {
  return (gradient(x) + grad_phi_x - target).norm();
}

BlockResult QfpProblem::solve_x(const BregmanGeometry& geom, const Vector& anchor,
                                const Vector& linear) const {
  geom.check_domain(anchor);
  const Vector grad_anchor = geom.grad(anchor);
  const Vector target = grad_anchor - linear;
  const double tol = inner_.tol * (1.0 + grad_anchor.norm());

  Vector x = anchor;
  Vector gx = grad_anchor;
  double res = x_residual(x, gx, target);
  int count = 0;
  // At least one update, so that the inner count reflects work done.
  while (count == 0 || res > tol) {
    if (count >= inner_.max_iter)
      throw ConvergenceError("qfp: x-block inner solver hit " + std::to_string(inner_.max_iter) +
                                 " iterations (residual " + format_double(res) + ")",
                             res);
    const Vector full = target - gradient(x);
    double tau = 1.0;
    bool accepted = false;
    for (int h = 0; h <= inner_.max_halvings; ++h, tau *= 0.5) {
      const Vector v = gx + tau * (full - gx);
      if (!geom.in_grad_range(v)) continue;
      const Vector trial = geom.inv_grad(v);
      if (!all_finite(trial) || !geom.in_domain(trial) || !(denominator(trial) > 0.0)) continue;
      const double trial_res = x_residual(trial, v, target);
      if (trial_res < res || (trial_res <= tol)) {
        x = trial;
        gx = v;
        res = trial_res;
        accepted = true;
        break;
      }
    }
    ++count;
    if (!accepted) {
      if (res <= tol) break;
      throw ConvergenceError("qfp: x-block damping failed to reduce the residual " +
                                 format_double(res),
                             res);
    }
  }
  return {x, count};
}

BlockResult QfpProblem::solve_y(const BregmanGeometry& geom, const Vector& anchor,
                                const Vector& linear) const {
  if (!separable(geom)) throw ConfigError("qfp: y block needs a separable kernel");
  const Index m = anchor.size();
  const Vector grad_anchor = geom.grad(anchor);
  Vector y(m);
  Vector v(1);
  for (Index i = 0; i < m; ++i) {
    v(0) = grad_anchor(i) - linear(i);
    if (geom.in_grad_range(v)) {
      y(i) = std::clamp(geom.inv_grad(v)(0), box_.lo, box_.hi);
    } else {
      // No stationary point: the subproblem is monotone on the box.
      const double at_lo = scalar_objective(geom, box_.lo, anchor(i), linear(i));
      const double at_hi = scalar_objective(geom, box_.hi, anchor(i), linear(i));
      y(i) = at_hi < at_lo ? box_.hi : box_.lo;
    }
  }
  return {y, 1};
}

std::optional<CouplingBounds> QfpProblem::coupling_bounds() const {
  return CouplingBounds{gamma_, gamma_};
}

void QfpProblem::check_geometries(const BregmanGeometry& gx, const BregmanGeometry& gy) const {
  if (gx.kind() == BregmanGeometry::Kind::Mahalanobis && gx.form()->rows() != x_size())
    throw ConfigError("qfp: mahalanobis form has the wrong dimension");
  if (!separable(gy))
    throw ConfigError("qfp: y geometry must be euclid, kl or is, got " + std::string(gy.token()));
}

BlockPoint QfpProblem::initial_point(std::uint64_t seed) const {
  Rng rng(seed);
  const Index m = x_size();
  BlockPoint z{Vector(m), Vector(m)};
  for (Index i = 0; i < m; ++i) z.x(i) = rng.uniform(box_.lo, box_.hi);
  for (Index i = 0; i < m; ++i) z.y(i) = rng.uniform(box_.lo, box_.hi);
  return z;
}

double qfp_min_vertex_denominator(const Vector& b, double d, const Box& box) {
  double s = d;
  for (Index i = 0; i < b.size(); ++i) s += std::min(b(i) * box.lo, b(i) * box.hi);
  return s;
}

std::filesystem::path qfp_problem1_path() {
  return std::filesystem::path(TIBPALM_DATA_DIR) / "qfp_problem1.txt";
}

QfpData qfp_load(const std::filesystem::path& path) {
  const Matrix raw = load_matrix(path);
  const Index m = raw.cols();
  if (raw.rows() != m + 2)
    throw InputError("qfp: " + path.string() + " must hold m + 2 rows of length m");
  QfpData data;
  data.M = raw.topRows(m);
  data.a = raw.row(m).transpose();
  data.b = raw.row(m + 1).transpose();
  return data;
}

QfpData qfp_random(Index m, std::uint64_t seed) {
  if (m <= 0) throw InputError("qfp: dimension must be positive");
  Rng rng(seed);
  const Matrix g = gaussian_matrix(m, m, rng);
  QfpData data;
  data.M = g.transpose() * g / static_cast<double>(m);
  data.a.resize(m);
  for (Index i = 0; i < m; ++i) data.a(i) = rng.normal();
  data.b.resize(m);
  for (Index i = 0; i < m; ++i) data.b(i) = rng.uniform(-1.0, 1.0);
  const Box box{1.0, 3.0};
  const double shift = qfp_min_vertex_denominator(data.b, 0.0, box);
  if (shift < -0.5 * data.d) data.b *= -0.5 * data.d / shift;
  return data;
}

}  // namespace tibpalm
