#include "tibpalm/bregman.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "tibpalm/errors.hpp"

namespace tibpalm {

struct BregmanGeometry::QuadraticData {
  Matrix form;
  Eigen::LLT<Matrix> llt;  // factorization of 2M, the Hessian of φ
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_scale(double mu, const char* what) {
  if (!(mu > 0) || !std::isfinite(mu))
    throw InputError(std::string(what) + ": scale mu must be positive and finite");
}

void require_same_size(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) throw InputError("bregman_distance: dimension mismatch");
}

}  // namespace

BregmanGeometry BregmanGeometry::euclidean(double mu) {
  require_scale(mu, "euclidean");
  return BregmanGeometry(Kind::Euclidean, mu, nullptr);
}

BregmanGeometry BregmanGeometry::kl(double mu) {
  require_scale(mu, "kl");
  return BregmanGeometry(Kind::KullbackLeibler, mu, nullptr);
}

BregmanGeometry BregmanGeometry::itakura_saito(double mu) {
  require_scale(mu, "itakura_saito");
  return BregmanGeometry(Kind::ItakuraSaito, mu, nullptr);
}

BregmanGeometry BregmanGeometry::mahalanobis(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw InputError("mahalanobis: form must be a nonempty square matrix");
  if (!m.allFinite()) throw InputError("mahalanobis: non-finite entry");
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * (1.0 + m.cwiseAbs().maxCoeff()))
    throw InputError("mahalanobis: form is not symmetric");

  auto data = std::make_shared<QuadraticData>();
  data->form = m;
  data->llt.compute(2.0 * m);
  if (data->llt.info() != Eigen::Success)
    throw InputError("mahalanobis: Cholesky factorization failed, form is not positive definite");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
  data->lambda_min = eig.eigenvalues().minCoeff();
  data->lambda_max = eig.eigenvalues().maxCoeff();
  if (!(data->lambda_min > 0))
    throw InputError("mahalanobis: Cholesky factorization failed, form is not positive definite");
  return BregmanGeometry(Kind::Mahalanobis, 0.0, std::move(data));
}

BregmanGeometry BregmanGeometry::from_token(std::string_view token, double mu) {
  if (token == "euclid") return euclidean(mu);
  if (token == "kl") return kl(mu);
  if (token == "is") return itakura_saito(mu);
  if (token == "mahalanobis")
    throw ConfigError("geometry 'mahalanobis' needs a problem-supplied form");
  throw ConfigError("unknown geometry '" + std::string(token) + "'");
}

std::string_view BregmanGeometry::token() const {
  switch (kind_) {
    case Kind::Euclidean: return "euclid";
    case Kind::KullbackLeibler: return "kl";
    case Kind::ItakuraSaito: return "is";
    case Kind::Mahalanobis: return "mahalanobis";
  }
  return "?";
}

const Matrix* BregmanGeometry::form() const { return quad_ ? &quad_->form : nullptr; }

bool BregmanGeometry::in_domain(const Vector& x) const {
  if (!x.allFinite()) return false;
  if (kind_ == Kind::KullbackLeibler || kind_ == Kind::ItakuraSaito)
    return (x.array() > kPositiveFloor).all();
  if (kind_ == Kind::Mahalanobis) return x.size() == quad_->form.rows();
  return true;
}

void BregmanGeometry::check_domain(const Vector& x) const {
  if (kind_ == Kind::Mahalanobis && x.size() != quad_->form.rows())
    throw DomainError("mahalanobis: dimension mismatch");
  for (Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x(i)))
      throw DomainError(std::string(token()) + ": non-finite coordinate " + std::to_string(i), i);
    if ((kind_ == Kind::KullbackLeibler || kind_ == Kind::ItakuraSaito) &&
        !(x(i) > kPositiveFloor))
      throw DomainError(std::string(token()) + ": coordinate " + std::to_string(i) +
                            " must be positive, got " + std::to_string(x(i)),
                        i);
  }
}

bool BregmanGeometry::in_grad_range(const Vector& v) const {
  if (!v.allFinite()) return false;
  if (kind_ == Kind::ItakuraSaito) return (v.array() < 0.0).all();
  return true;
}

double BregmanGeometry::phi(const Vector& x) const {
  check_domain(x);
  switch (kind_) {
    case Kind::Euclidean: return 0.5 * mu_ * x.squaredNorm();
    case Kind::KullbackLeibler: return mu_ * (x.array() * x.array().log()).sum();
    case Kind::ItakuraSaito: return -mu_ * x.array().log().sum();
    case Kind::Mahalanobis: return x.dot(quad_->form * x);
  }
  return 0.0;
}

Vector BregmanGeometry::grad(const Vector& x) const {
  check_domain(x);
  switch (kind_) {
    case Kind::Euclidean: return mu_ * x;
    case Kind::KullbackLeibler: return (mu_ * (1.0 + x.array().log())).matrix();
    case Kind::ItakuraSaito: return (-mu_ / x.array()).matrix();
    case Kind::Mahalanobis: return 2.0 * (quad_->form * x);
  }
  return x;
}

Vector BregmanGeometry::inv_grad(const Vector& v) const {
  for (Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v(i)))
      throw DomainError(std::string(token()) + ": non-finite dual coordinate " + std::to_string(i),
                        i);
    if (kind_ == Kind::ItakuraSaito && !(v(i) < 0.0))
      throw DomainError("is: dual coordinate " + std::to_string(i) + " outside (-inf, 0)", i);
  }
  switch (kind_) {
    case Kind::Euclidean: return v / mu_;
    case Kind::KullbackLeibler: return (v.array() / mu_ - 1.0).exp().matrix();
    case Kind::ItakuraSaito: return (-mu_ / v.array()).matrix();
    case Kind::Mahalanobis: return quad_->llt.solve(v);
  }
  return v;
}

double BregmanGeometry::theta(std::optional<Box> box) const {
  switch (kind_) {
    case Kind::Euclidean: return mu_;
    case Kind::Mahalanobis: return 2.0 * quad_->lambda_min;
    case Kind::KullbackLeibler:
      // φ'' = μ/t, smallest at the top of the box.
      return box && box->hi > 0 ? mu_ / box->hi : 0.0;
    case Kind::ItakuraSaito:
      // φ'' = μ/t².
      return box && box->hi > 0 ? mu_ / (box->hi * box->hi) : 0.0;
  }
  return 0.0;
}

double BregmanGeometry::grad_lipschitz(std::optional<Box> box) const {
  switch (kind_) {
    case Kind::Euclidean: return mu_;
    case Kind::Mahalanobis: return 2.0 * quad_->lambda_max;
    case Kind::KullbackLeibler:
      return box && box->lo > 0 ? mu_ / box->lo : kInf;
    case Kind::ItakuraSaito:
      return box && box->lo > 0 ? mu_ / (box->lo * box->lo) : kInf;
  }
  return kInf;
}

double bregman_distance(const BregmanGeometry& geom, const Vector& x, const Vector& y) {
  require_same_size(x, y);
  geom.check_domain(x);
  geom.check_domain(y);
  const double mu = geom.scale();
  switch (geom.kind()) {
    case BregmanGeometry::Kind::Euclidean: return 0.5 * mu * (x - y).squaredNorm();
    case BregmanGeometry::Kind::Mahalanobis: {
      const Vector d = x - y;
      return d.dot(*geom.form() * d);
    }
    case BregmanGeometry::Kind::KullbackLeibler: {
      double s = 0.0;
      for (Index i = 0; i < x.size(); ++i) {
        // x ln(x/y) + y − x  =  y·h(r) with r = x/y and h(r) = r ln r − r + 1 ≥ 0.
        const double r = x(i) / y(i);
        s += y(i) * (r * std::log(r) - (r - 1.0));
      }
      return mu * std::max(s, 0.0);
    }
    case BregmanGeometry::Kind::ItakuraSaito: {
      double s = 0.0;
      for (Index i = 0; i < x.size(); ++i) {
        // r − ln r − 1 with r = x/y.
        const double r = x(i) / y(i);
        s += (r - 1.0) - std::log1p(r - 1.0);
      }
      return mu * std::max(s, 0.0);
    }
  }
  return 0.0;
}

}  // namespace tibpalm
