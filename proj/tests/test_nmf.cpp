#include <doctest.h>

#include "oracles.hpp"
#include "tibpalm/engine.hpp"
#include "tibpalm/errors.hpp"
#include "tibpalm/problems/nmf.hpp"
#include "tibpalm/random.hpp"

using namespace tibpalm;

namespace {

Matrix uniform_matrix(Rng& rng, Index r, Index c) {
  Matrix m(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) m(i, j) = rng.uniform();
  return m;
}

}  // namespace

TEST_SUITE("nmf") {
  TEST_CASE("objective at the origin and at an exact factorization") {
    Rng rng(1);
    const Matrix x = uniform_matrix(rng, 6, 2), y = uniform_matrix(rng, 2, 5);
    const Matrix a = x * y;
    CHECK(nmf_objective(a, Matrix::Zero(6, 2), Matrix::Zero(2, 5), 0.5) ==
          doctest::Approx(0.25 * a.squaredNorm()));
    CHECK(nmf_objective(a, x, y, 0.5) == doctest::Approx(0.0));
    CHECK(nmf_grad_x(a, x, y, 0.5).norm() <= 1e-14);
    CHECK(nmf_grad_y(a, x, y, 0.5).norm() <= 1e-14);
  }

  TEST_CASE("gradients match finite differences") {
    Rng rng(2);
    const Matrix a = uniform_matrix(rng, 7, 5);
    const Matrix x = uniform_matrix(rng, 7, 3), y = uniform_matrix(rng, 3, 5);
    const Vector gx = SparseNmfProblem::flatten(nmf_grad_x(a, x, y, 0.5));
    const Vector fx = oracle::central_gradient(
        [&](const Vector& v) { return nmf_objective(a, Eigen::Map<const Matrix>(v.data(), 7, 3), y, 0.5); },
        SparseNmfProblem::flatten(x));
    CHECK(oracle::relative_error(gx, fx) <= 1e-5);
    const Vector gy = SparseNmfProblem::flatten(nmf_grad_y(a, x, y, 0.5));
    const Vector fy = oracle::central_gradient(
        [&](const Vector& v) { return nmf_objective(a, x, Eigen::Map<const Matrix>(v.data(), 3, 5), 0.5); },
        SparseNmfProblem::flatten(y));
    CHECK(oracle::relative_error(gy, fy) <= 1e-5);
  }

  TEST_CASE("step sizes") {
    auto [m1, m2] = nmf_stepsizes(Matrix::Identity(4, 3), Matrix::Identity(3, 3), 0.5);
    CHECK(m1 == doctest::Approx(1.01 * 0.5));
    CHECK(m2 == doctest::Approx(1.01 * 0.5));
    std::tie(m1, m2) = nmf_stepsizes(Matrix::Zero(4, 3), Matrix::Zero(3, 5), 0.5);
    CHECK(m1 == 1e-8);
    CHECK(m2 == 1e-8);
    Rng rng(3);
    const Matrix x = uniform_matrix(rng, 9, 4), y = uniform_matrix(rng, 4, 6);
    std::tie(m1, m2) = nmf_stepsizes(x, y, 0.5);
    CHECK(m1 == doctest::Approx(1.01 * 0.5 * oracle::largest_eigenvalue(y * y.transpose())).epsilon(0.01));
    CHECK(m2 == doctest::Approx(1.01 * 0.5 * oracle::largest_eigenvalue(x.transpose() * x)).epsilon(0.01));
  }

  TEST_CASE("block updates") {
    const SparsityBudget budget{0.5};
    Matrix x(4, 1);
    x << 1, 0, 2, 0;
    CHECK(nmf_x_update(x, Matrix::Zero(4, 1), 3.0, budget) == x);
    Matrix y(1, 2);
    y << 0.5, 1;
    CHECK(nmf_y_update(y, Matrix::Zero(1, 2), 2.0) == y);

    // 1×1 by hand: A = 2, X = 1, Y = 1, λ = 0.5 → ∇X = 0.5·(1 − 2)·1 = −0.5,
    // μ₁ = 1.01·0.5 = 0.505, X⁺ = 1 + 0.5/0.505.
    Matrix a(1, 1), one(1, 1);
    a << 2;
    one << 1;
    const auto [mu1, mu2] = nmf_stepsizes(one, one, 0.5);
    const Matrix xn = nmf_x_update(one, nmf_grad_x(a, one, one, 0.5), mu1, SparsityBudget{1.0});
    CHECK(xn(0, 0) == doctest::Approx(1 + 0.5 / 0.505));
    const Matrix yn = nmf_y_update(one, nmf_grad_y(a, xn, one, 0.5), mu2);
    CHECK(yn(0, 0) == doctest::Approx(1 - 0.5 * xn(0, 0) * (xn(0, 0) - 2) / 0.505));
  }

  TEST_CASE("constraints hold along a run") {
    const SparseNmfProblem p(nmf_synthetic(30, 20, 5, 0.25, 4), 5, SparsityBudget{0.25});
    const Geometries g{BregmanGeometry::euclidean(1), BregmanGeometry::euclidean(1)};
    RunOptions opts;
    opts.override_theory = true;
    opts.stop = {1e-30, 200};
    long checked = 0;
    opts.observer = [&](const SolverState& s) {
      const Matrix x = p.X_of(s.x_k);
      CHECK(p.x_feasible(x));
      CHECK((p.Y_of(s.y_k).array() >= 0).all());
      ++checked;
    };
    const auto t = run(p, g, InertialSchedule::constant(0.2, 0.3, 0.2, 0.3, 0), opts, 1);
    CHECK(checked == 201);
    CHECK(t.records.back().objective < t.records.front().objective);
  }

  TEST_CASE("problem checks") {
    CHECK_THROWS_AS(SparseNmfProblem(Matrix::Ones(3, 3), 0), InputError);
    const SparseNmfProblem p(Matrix::Ones(3, 3), 2);
    const Geometries kl{BregmanGeometry::kl(1), BregmanGeometry::euclidean(1)};
    CHECK_THROWS_AS(p.check_geometries(kl.x, kl.y), ConfigError);
    CHECK_FALSE(p.coupling_bounds().has_value());
    Vector bad = Vector::Ones(6);
    bad(0) = -1;
    CHECK(std::isinf(p.f(bad)));
  }
}
