#include <doctest.h>

#include <Eigen/Cholesky>
#include <cmath>

#include "oracles.hpp"
#include "tibpalm/engine.hpp"
#include "tibpalm/errors.hpp"
#include "tibpalm/problems/sigrec.hpp"
#include "tibpalm/prox.hpp"
#include "tibpalm/random.hpp"

using namespace tibpalm;

TEST_SUITE("sigrec") {
  TEST_CASE("generated instances") {
    const auto p = sigrec_make(40, 200, 9, false);
    CHECK((p.A() * p.truth() - p.b()).norm() <= 1e-12);
    CHECK((p.truth().array() != 0).count() == 10);
    CHECK(p.eta() == sigrec_eta(p.A(), p.b()));
    CHECK(p.a_norm_sq() <= 1.0 + 1e-12);
    const auto q = sigrec_make(40, 200, 9, false);
    CHECK(q.A() == p.A());
    CHECK(q.b() == p.b());
    const auto noisy = sigrec_make(40, 200, 9, true);
    CHECK(noisy.A() == p.A());
    CHECK((noisy.b() - p.b()).norm() > 0);
    CHECK_THROWS_AS(sigrec_make(50, 50, 1, false), InputError);
  }

  TEST_CASE("admissibility margin follows the recipe") {
    const auto p = sigrec_make(40, 200, 2, false);
    const double rho = *admissibility_margin(p, p.sigrec_x_geometry(), p.sigrec_y_geometry());
    CHECK(rho == doctest::Approx(std::min(2.0 - p.a_norm_sq() - 0.2, 1.5 - 0.2)).epsilon(1e-9));
    CHECK(rho == doctest::Approx(0.8).epsilon(1e-6));
  }

  TEST_CASE("x update fixed point with zero data") {
    const Matrix a = Matrix::Zero(2, 3);
    // A = 0 makes η vanish, so build with a positive η directly.
    const SignalRecoveryProblem p(a, Vector::Zero(2), 0.1);
    const Vector x = Vector::LinSpaced(3, -1, 1);
    CHECK(sigrec_x_update(p, x, x, x, x, 0, 0) == x);
  }

  TEST_CASE("x update solves the block subproblem") {
    Matrix a(1, 2);
    a << 0.6, 0.3;
    Vector b(1);
    b << 0.5;
    const SignalRecoveryProblem p(a, b, 0.01);
    Rng rng(4);
    for (int t = 0; t < 20; ++t) {
      Vector xk(2), xm1(2), xm2(2), yk(2);
      for (Vector* v : {&xk, &xm1, &xm2, &yk})
        for (Index i = 0; i < 2; ++i) (*v)(i) = rng.uniform(-1, 1);
      const double a1 = 0.1, a2 = 0.05, gamma = 0.2, mu = 2.0;
      const Vector x = sigrec_x_update(p, xk, xm1, xm2, yk, a1, a2);
      // ½‖Au − b‖² + ⟨u, c⟩ + ½‖u − x_k‖²_{μI − AᵀA}, c = γ(x_k − y_k) + α₁(x_{k−1} − x_k) + α₂(x_{k−2} − x_{k−1}).
      const Vector c = gamma * (xk - yk) + a1 * (xm1 - xk) + a2 * (xm2 - xm1);
      const Matrix ata = a.transpose() * a;
      const Matrix metric = mu * Matrix::Identity(2, 2) - ata;
      const Matrix lhs = ata + metric;
      const Vector rhs = a.transpose() * b - c + metric * xk;
      const Vector direct = Eigen::LLT<Matrix>(lhs).solve(rhs);
      CHECK((x - direct).norm() <= 1e-12);
      const Vector grad = ata * x - a.transpose() * b + c + metric * (x - xk);
      CHECK(grad.norm() <= 1e-10);
    }
  }

  TEST_CASE("y update reductions") {
    const auto p = sigrec_make(10, 30, 1, false);
    Rng rng(5);
    Vector y(30), x(30);
    for (Index i = 0; i < 30; ++i) {
      y(i) = rng.normal();
      x(i) = rng.normal();
    }
    const double lambda = p.params().lambda;
    SignalRecoveryParams zero_gamma = p.params();
    zero_gamma.gamma = 1e-300;
    const SignalRecoveryProblem q(p.A(), p.b(), p.eta(), zero_gamma);
    CHECK((sigrec_y_update(q, x, y, y, y, 0, 0) - half_shrinkage(y, p.eta() / lambda)).norm() <=
          1e-12);

    const SignalRecoveryProblem tiny(p.A(), p.b(), 1e-300, p.params());
    const Vector plain = y + p.params().gamma * (x - y) / lambda;
    CHECK((sigrec_y_update(tiny, x, y, y, y, 0, 0) - plain).norm() <= 1e-12);
  }

  TEST_CASE("y update minimizes each coordinate") {
    const auto p = sigrec_make(10, 30, 6, true);
    Rng rng(6);
    Vector y(30), ym1(30), ym2(30), x(30);
    for (Index i = 0; i < 30; ++i) {
      y(i) = rng.normal() * 0.05;
      ym1(i) = rng.normal() * 0.05;
      ym2(i) = rng.normal() * 0.05;
      x(i) = rng.normal() * 0.05;
    }
    const double lam = p.params().lambda, gamma = p.params().gamma, eta = p.eta();
    const double b1 = 0.1, b2 = 0.2;
    const Vector out = sigrec_y_update(p, x, y, ym1, ym2, b1, b2);
    for (Index i = 0; i < 30; ++i) {
      const double lin = gamma * (y(i) - x(i)) + b1 * (ym1(i) - y(i)) + b2 * (ym2(i) - ym1(i));
      auto f = [&](double t) {
        return eta * std::sqrt(std::abs(t)) + lin * t + 0.5 * lam * (t - y(i)) * (t - y(i));
      };
      const double r = std::abs(y(i)) + 1.0;
      const double ref = oracle::grid_minimize(f, -r, r, 1e-5, {0.0});
      CHECK(std::abs(out(i) - ref) <= 1e-6);
    }
  }

  TEST_CASE("exact block minimizers") {
    const auto p = sigrec_make(10, 30, 7, true);
    Rng rng(7);
    Vector y(30), anchor(30), lin(30);
    for (Index i = 0; i < 30; ++i) {
      y(i) = rng.normal();
      anchor(i) = rng.normal();
      lin(i) = 0.1 * rng.normal();
    }
    const double gamma = p.params().gamma;
    for (const auto& g : {BregmanGeometry::euclidean(2.0), p.sigrec_x_geometry()}) {
      const Vector x = p.exact_x(g, y, anchor, lin).value;
      const Vector grad = p.A().transpose() * (p.A() * x - p.b()) + gamma * (x - y) +
                          g.grad(x) - g.grad(anchor) + lin;
      CHECK(grad.norm() <= 1e-9);
    }
    const Vector x = p.prox_x(anchor, 3.0);
    const Vector grad = p.A().transpose() * (p.A() * x - p.b()) + 3.0 * (x - anchor);
    CHECK(grad.norm() <= 1e-10);
  }

  TEST_CASE("terminal gap on a converged run") {
    const auto p = sigrec_make(40, 200, 3, false);
    const Geometries g{p.sigrec_x_geometry(), p.sigrec_y_geometry()};
    const double rho = *admissibility_margin(p, g.x, g.y);
    const double al = 0.99 * rho / 4;
    RunOptions opts;
    opts.stop.max_iter = 20000;
    const auto t = run(p, g, InertialSchedule::constant(al, al, al, al, rho), opts, 0);
    REQUIRE(t.summary.reason == Termination::Converged);
    // The gap at a stationary point is set by eta/gamma, not by the stopping
    // tolerance; 0.25 is a calibrated ceiling over the acceptance seeds.
    CHECK(t.summary.xy_gap <= 0.25);
  }

  TEST_CASE("geometry checks") {
    const auto p = sigrec_make(10, 30, 1, false);
    CHECK_THROWS_AS(p.check_geometries(BregmanGeometry::kl(1), BregmanGeometry::euclidean(1)),
                    ConfigError);
    CHECK_THROWS_AS(p.check_geometries(BregmanGeometry::euclidean(1), BregmanGeometry::kl(1)),
                    ConfigError);
    CHECK_THROWS_AS(SignalRecoveryProblem(p.A(), p.b(), p.eta(), {0.2, 0.5, 1.5}), InputError);
  }
}
