#include "tibpalm/problems/sigrec.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <numeric>
#include <vector>

#include "tibpalm/errors.hpp"
#include "tibpalm/prox.hpp"
#include "tibpalm/random.hpp"

namespace tibpalm {

namespace {

BregmanGeometry make_x_geometry(const Matrix& a, double mu) {
  Matrix form = -0.5 * (a.transpose() * a);
  form.diagonal().array() += 0.5 * mu;
  return BregmanGeometry::mahalanobis(form);
}

}  // namespace

SignalRecoveryProblem::SignalRecoveryProblem(Matrix a, Vector b, double eta,
                                             SignalRecoveryParams params, Vector truth)
    : a_(std::move(a)),
      b_(std::move(b)),
      eta_(eta),
      params_(params),
      truth_(std::move(truth)),
      a_norm_sq_(0.0),
      x_geom_(BregmanGeometry::euclidean(1.0)) {
  if (a_.size() == 0) throw InputError("sigrec: empty sensing matrix");
  if (b_.size() != a_.rows()) throw InputError("sigrec: b has the wrong length");
  if (!all_finite(a_) || !all_finite(b_)) throw InputError("sigrec: non-finite data");
  if (!(eta_ > 0.0) || !std::isfinite(eta_)) throw InputError("sigrec: eta must be positive");
  if (!(params_.gamma > 0.0) || !(params_.mu > 0.0) || !(params_.lambda > 0.0))
    throw InputError("sigrec: gamma, mu and lambda must be positive");
  if (truth_.size() != 0 && truth_.size() != a_.cols())
    throw InputError("sigrec: ground truth has the wrong length");

  atb_ = a_.transpose() * b_;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a_ * a_.transpose());
  aat_vectors_ = eig.eigenvectors();
  aat_values_ = eig.eigenvalues().cwiseMax(0.0);
  a_norm_sq_ = aat_values_.maxCoeff();
  if (a_norm_sq_ >= params_.mu)
    throw InputError("sigrec: mu must exceed the squared norm of A");
  x_geom_ = make_x_geometry(a_, params_.mu);
}

double SignalRecoveryProblem::f(const Vector& x) const { return 0.5 * (a_ * x - b_).squaredNorm(); }

double SignalRecoveryProblem::g(const Vector& y) const {
  return eta_ * y.array().abs().sqrt().sum();
}

double SignalRecoveryProblem::coupling(const Vector& x, const Vector& y) const {
  return 0.5 * params_.gamma * (x - y).squaredNorm();
}

Vector SignalRecoveryProblem::coupling_grad_x(const Vector& x, const Vector& y) const {
  return params_.gamma * (x - y);
}

Vector SignalRecoveryProblem::coupling_grad_y(const Vector& x, const Vector& y) const {
  return params_.gamma * (y - x);
}

Vector SignalRecoveryProblem::solve_shifted(double t, const Vector& rhs) const {
  // (AᵀA + tI)⁻¹ = (1/t)(I − Aᵀ(AAᵀ + tI)⁻¹A)
  Vector w = aat_vectors_.transpose() * (a_ * rhs);
  w.array() /= (aat_values_.array() + t);
  return (rhs - a_.transpose() * (aat_vectors_ * w)) / t;
}

Vector SignalRecoveryProblem::solve_with_form(const Matrix& form, double shift,
                                              const Vector& rhs) const {
  Matrix lhs = a_.transpose() * a_ + 2.0 * form;
  lhs.diagonal().array() += shift;
  Eigen::LLT<Matrix> llt(lhs);
  if (llt.info() != Eigen::Success) throw DomainError("sigrec: x-block system is singular", -1);
  return llt.solve(rhs);
}

BlockResult SignalRecoveryProblem::solve_x(const BregmanGeometry& geom, const Vector& anchor,
                                           const Vector& linear) const {
  switch (geom.kind()) {
    case BregmanGeometry::Kind::Euclidean: {
      const double t = geom.scale();
      return {solve_shifted(t, atb_ - linear + t * anchor)};
    }
    case BregmanGeometry::Kind::Mahalanobis: {
      if (is_own_x_geometry(geom)) {
        Vector v = params_.mu * anchor - a_.transpose() * (a_ * anchor) + atb_ - linear;
        return {v / params_.mu};
      }
      const Matrix& form = *geom.form();
      return {solve_with_form(form, 0.0, atb_ - linear + 2.0 * (form * anchor))};
    }
    default:
      throw ConfigError("sigrec: x block needs a quadratic kernel");
  }
}

BlockResult SignalRecoveryProblem::solve_y(const BregmanGeometry& geom, const Vector& anchor,
                                           const Vector& linear) const {
  if (geom.kind() != BregmanGeometry::Kind::Euclidean)
    throw ConfigError("sigrec: y block needs a Euclidean kernel");
  const double t = geom.scale();
  return {half_shrinkage(anchor - linear / t, eta_ / t)};
}

Vector SignalRecoveryProblem::prox_x(const Vector& point, double t) const {
  return solve_shifted(t, atb_ + t * point);
}

Vector SignalRecoveryProblem::prox_y(const Vector& point, double t) const {
  return half_shrinkage(point, eta_ / t);
}

bool SignalRecoveryProblem::supports_exact_blocks(const BregmanGeometry& gx,
                                                  const BregmanGeometry& gy) const {
  const bool x_ok = gx.kind() == BregmanGeometry::Kind::Euclidean ||
                    gx.kind() == BregmanGeometry::Kind::Mahalanobis;
  return x_ok && gy.kind() == BregmanGeometry::Kind::Euclidean;
}

BlockResult SignalRecoveryProblem::exact_x(const BregmanGeometry& geom, const Vector& y,
                                           const Vector& anchor, const Vector& linear) const {
  const double gamma = params_.gamma;
  switch (geom.kind()) {
    case BregmanGeometry::Kind::Euclidean: {
      const double t = geom.scale();
      return {solve_shifted(gamma + t, atb_ + gamma * y + t * anchor - linear)};
    }
    case BregmanGeometry::Kind::Mahalanobis: {
      if (is_own_x_geometry(geom)) {
        Vector v = params_.mu * anchor - a_.transpose() * (a_ * anchor) + atb_ + gamma * y - linear;
        return {v / (params_.mu + gamma)};
      }
      const Matrix& form = *geom.form();
      return {solve_with_form(form, gamma, atb_ + gamma * y + 2.0 * (form * anchor) - linear)};
    }
    default:
      throw ConfigError("sigrec: x block needs a quadratic kernel");
  }
}

BlockResult SignalRecoveryProblem::exact_y(const BregmanGeometry& geom, const Vector& x,
                                           const Vector& anchor, const Vector& linear) const {
  if (geom.kind() != BregmanGeometry::Kind::Euclidean)
    throw ConfigError("sigrec: y block needs a Euclidean kernel");
  const double gamma = params_.gamma;
  const double t = geom.scale();
  const Vector centre = (gamma * x + t * anchor - linear) / (gamma + t);
  return {half_shrinkage(centre, eta_ / (gamma + t))};
}

std::optional<CouplingBounds> SignalRecoveryProblem::coupling_bounds() const {
  return CouplingBounds{params_.gamma, params_.gamma};
}

void SignalRecoveryProblem::check_geometries(const BregmanGeometry& gx,
                                             const BregmanGeometry& gy) const {
  if (gx.kind() != BregmanGeometry::Kind::Euclidean &&
      gx.kind() != BregmanGeometry::Kind::Mahalanobis)
    throw ConfigError("sigrec: x geometry must be euclid or mahalanobis, got " +
                      std::string(gx.token()));
  if (gx.kind() == BregmanGeometry::Kind::Mahalanobis && gx.form()->rows() != x_size())
    throw ConfigError("sigrec: mahalanobis form has the wrong dimension");
  if (gy.kind() != BregmanGeometry::Kind::Euclidean)
    throw ConfigError("sigrec: y geometry must be euclid, got " + std::string(gy.token()));
}

BlockPoint SignalRecoveryProblem::initial_point(std::uint64_t) const {
  return {Vector::Zero(x_size()), Vector::Zero(y_size())};
}

double sigrec_eta(const Matrix& a, const Vector& b) {
  return 0.001 * (a.transpose() * b).cwiseAbs().maxCoeff();
}

SignalRecoveryProblem sigrec_make(Index n, Index m, std::uint64_t seed, bool noisy,
                                  SignalRecoveryParams params, SignalRecoveryInstance instance) {
  if (n <= 0 || m <= 0) throw InputError("sigrec: dimensions must be positive");
  if (n >= m) throw InputError("sigrec: need fewer measurements than unknowns (n < m)");
  if (!(instance.sparsity > 0.0) || instance.sparsity > 1.0)
    throw InputError("sigrec: sparsity must lie in (0, 1]");
  if (!(instance.noise_variance >= 0.0)) throw InputError("sigrec: noise variance must be >= 0");

  Rng rng(seed);
  Matrix a = normalize_for_contraction(gaussian_matrix(n, m, rng));

  const auto nnz = static_cast<Index>(std::ceil(instance.sparsity * static_cast<double>(m)));
  std::vector<Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  Vector truth = Vector::Zero(m);
  for (Index i = 0; i < nnz; ++i) {
    const auto j = i + static_cast<Index>(rng.index(static_cast<std::uint64_t>(m - i)));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    truth(order[static_cast<std::size_t>(i)]) = rng.normal();
  }

  Vector b = a * truth;
  if (noisy) {
    const double sigma = std::sqrt(instance.noise_variance);
    for (Index i = 0; i < n; ++i) b(i) += sigma * rng.normal();
  }
  const double eta = sigrec_eta(a, b);
  return SignalRecoveryProblem(std::move(a), std::move(b), eta, params, std::move(truth));
}

Vector sigrec_x_update(const SignalRecoveryProblem& p, const Vector& x_k, const Vector& x_km1,
                       const Vector& x_km2, const Vector& y_k, double alpha1k, double alpha2k) {
  const double mu = p.params().mu;
  const Matrix& a = p.A();
  Vector v = mu * x_k - a.transpose() * (a * x_k) + a.transpose() * p.b() -
             p.params().gamma * (x_k - y_k) + alpha1k * (x_k - x_km1) + alpha2k * (x_km1 - x_km2);
  return v / mu;
}

Vector sigrec_y_update(const SignalRecoveryProblem& p, const Vector& x_next, const Vector& y_k,
                       const Vector& y_km1, const Vector& y_km2, double beta1k, double beta2k) {
  const double lambda = p.params().lambda;
  Vector centre = y_k + (p.params().gamma * (x_next - y_k) + beta1k * (y_k - y_km1) +
                         beta2k * (y_km1 - y_km2)) /
                            lambda;
  return half_shrinkage(centre, p.eta() / lambda);
}

}  // namespace tibpalm
