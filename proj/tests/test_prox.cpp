#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tibpalm/errors.hpp"
#include "tibpalm/prox.hpp"
#include "tibpalm/random.hpp"

using namespace tibpalm;

namespace {

double half_objective(double t, double a, double kappa) {
  return kappa * std::sqrt(std::abs(t)) + 0.5 * (t - a) * (t - a);
}

double half_oracle(double a, double kappa) {
  auto f = [&](double t) { return half_objective(t, a, kappa); };
  const double r = std::abs(a) + 1.0;
  return oracle::grid_minimize(f, -r, r, 1e-4, {0.0});
}

}  // namespace

TEST_SUITE("prox") {
  TEST_CASE("half shrinkage zero branch") {
    CHECK(half_shrinkage(0.0, 0.3) == 0.0);
    CHECK(half_shrinkage(0.7, 1.0) == 0.0);
    CHECK(half_shrinkage(-0.7, 1.0) == 0.0);
    CHECK(half_shrinkage(half_shrinkage_threshold(2.0), 2.0) == 0.0);
    CHECK(half_shrinkage(half_shrinkage_threshold(2.0) * (1 + 1e-9), 2.0) != 0.0);
  }

  TEST_CASE("half shrinkage at kappa 1, a 2 matches the oracle") {
    const double h = half_shrinkage(2.0, 1.0);
    CHECK(std::abs(h - half_oracle(2.0, 1.0)) <= 1e-6);
    // Stationarity of |t|^{1/2} + (t - 2)^2 / 2 at the nonzero root.
    CHECK(std::abs(0.5 / std::sqrt(h) + h - 2.0) <= 1e-12);
  }

  TEST_CASE("half shrinkage is odd and global") {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
      const double a = rng.uniform(-5, 5), kappa = rng.uniform(0.01, 3);
      const double h = half_shrinkage(a, kappa);
      CHECK(half_shrinkage(-a, kappa) == -h);
      CHECK(half_objective(h, a, kappa) <= half_objective(0.0, a, kappa) + 1e-12);
    }
  }

  TEST_CASE("half shrinkage vector form and parameter check") {
    Vector a(3);
    a << 2, -0.1, -3;
    const Vector h = half_shrinkage(a, 1.0);
    for (Index i = 0; i < 3; ++i) CHECK(h(i) == half_shrinkage(a(i), 1.0));
    CHECK_THROWS_AS(half_shrinkage(a, 0.0), InputError);
    CHECK_THROWS_AS(half_shrinkage(a, -1.0), InputError);
  }

  TEST_CASE("box projection") {
    Vector v(2);
    v << 0, 5;
    const Vector p = project_box(v, 1, 3);
    CHECK(p(0) == 1);
    CHECK(p(1) == 3);
    CHECK(project_box(p, 1, 3) == p);
    Rng rng(2);
    for (int i = 0; i < 50; ++i) {
      Vector r(4);
      for (Index j = 0; j < 4; ++j) r(j) = rng.uniform(-2, 6);
      const Vector q = project_box(r, 1, 3);
      for (Index j = 0; j < 4; ++j) {
        // The nearest box point coordinatewise is the clamp.
        const double best = r(j) < 1 ? 1 : (r(j) > 3 ? 3 : r(j));
        CHECK(q(j) == best);
      }
    }
  }

  TEST_CASE("nonnegative projection") {
    Vector v(2);
    v << -1, 2;
    CHECK(project_nonneg(v) == Vector((Vector(2) << 0, 2).finished()));
    CHECK(project_nonneg(-Vector::Ones(3)) == Vector::Zero(3));
    const Vector pos = Vector::LinSpaced(4, 0, 3);
    CHECK(project_nonneg(pos) == pos);
  }

  TEST_CASE("sparse nonnegative projection") {
    Vector col(4);
    col << 3, -1, 2, 0.5;
    const SparsityBudget half{0.5};
    const Vector p = project_sparse_nonneg(col, half);
    CHECK(p == Vector((Vector(4) << 3, 0, 2, 0).finished()));
    CHECK(p == oracle::sparse_projection_by_enumeration(col, 2));
    CHECK(project_sparse_nonneg(Vector::Zero(5), half) == Vector::Zero(5));
    CHECK(project_sparse_nonneg(col, SparsityBudget{1.0}) == project_nonneg(col));

    Vector ties(3);
    ties << 1, 1, 1;
    CHECK(project_sparse_nonneg(ties, SparsityBudget{0.3}) ==
          Vector((Vector(3) << 1, 0, 0).finished()));
  }

  TEST_CASE("sparse projection beats random feasible points") {
    Rng rng(7);
    const SparsityBudget budget{0.25};
    for (int trial = 0; trial < 20; ++trial) {
      Vector col(8);
      for (Index i = 0; i < 8; ++i) col(i) = rng.uniform(-2, 2);
      const Vector p = project_sparse_nonneg(col, budget);
      const Index k = budget.keep(8);
      CHECK((p.array() >= 0).all());
      CHECK((p.array() != 0).count() <= k);
      CHECK((p - col).squaredNorm() ==
            doctest::Approx((oracle::sparse_projection_by_enumeration(col, k) - col).squaredNorm()));
      for (int s = 0; s < 1000; ++s) {
        Vector q = Vector::Zero(8);
        for (Index j = 0; j < k; ++j) q(static_cast<Index>(rng.index(8))) = rng.uniform(0, 2);
        CHECK((p - col).squaredNorm() <= (q - col).squaredNorm() + 1e-12);
      }
    }
  }

  TEST_CASE("sparsity budget") {
    CHECK(SparsityBudget{0.25}.keep(60) == 15);
    CHECK(SparsityBudget{0.01}.keep(10) == 1);
    CHECK_THROWS_AS(SparsityBudget{0.0}.validate(), InputError);
    CHECK_THROWS_AS(SparsityBudget{1.5}.validate(), InputError);
    Matrix m(3, 2);
    m << 1, -1, 2, 5, 3, 4;
    const Matrix p = project_sparse_nonneg_columns(m, SparsityBudget{0.34});
    CHECK(p.col(0) == Vector((Vector(3) << 0, 2, 3).finished()));
    CHECK(p.col(1) == Vector((Vector(3) << 0, 5, 4).finished()));
  }
}
