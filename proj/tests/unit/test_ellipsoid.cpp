#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "rdchain/ellipsoid.hpp"
#include "rdchain/error.hpp"
#include "rdchain/rng.hpp"

using namespace rdchain;

namespace {

Eigen::VectorXd random_vector(Eigen::Index d, RngStream& rng, double scale) {
  Eigen::VectorXd x(d);
  for (Eigen::Index i = 0; i < d; ++i) x(i) = scale * rng.normal();
  return x;
}

// Projected gradient on the gauge ball, the slow independent solver.
Eigen::VectorXd pg_projection(const Eigen::VectorXd& x, const EllipsoidSpec& E, int iterations) {
  // minimize |z - x|^2 over {sum z^2/a^2 <= 1} through w = z / a on the unit ball
  const Eigen::VectorXd a = E.axes;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(x.size());
  const double L = 2.0 * a.cwiseAbs2().maxCoeff();
  for (int k = 0; k < iterations; ++k) {
    const Eigen::VectorXd grad = 2.0 * a.cwiseProduct(a.cwiseProduct(w) - x);
    w -= grad / L;
    const double nw = w.norm();
    if (nw > 1.0) w /= nw;
  }
  return a.cwiseProduct(w);
}

}  // namespace

TEST_SUITE("ellipsoid") {
  TEST_CASE("sobolev ellipsoid") {
    const auto e = sobolev_ellipsoid(1.0, 3);
    CHECK(e.axes(1) == doctest::Approx(0.5));
    CHECK(e.axes(2) == doctest::Approx(1.0 / 3.0));
    CHECK(sobolev_ellipsoid(0.75, 2).axes(1) == doctest::Approx(std::pow(2.0, -0.75)));
    CHECK_THROWS_AS(sobolev_ellipsoid(0.4, 5), Error);
    CHECK_THROWS_AS(EllipsoidSpec(Eigen::Vector2d(0.5, 1.0)), Error);
  }

  TEST_CASE("projection examples") {
    const auto e = sobolev_ellipsoid(1.0, 4);
    const Eigen::Vector4d inside(0.1, 0.05, 0.0, 0.01);
    CHECK((project_ellipsoid(inside, e) - inside).norm() == 0.0);
    const Eigen::Vector4d axis(2.0, 0.0, 0.0, 0.0);
    CHECK((project_ellipsoid(axis, e) - Eigen::Vector4d(1, 0, 0, 0)).norm() < 1e-12);

    RngStream rng(41, 0);
    for (int k = 0; k < 10; ++k) {
      const auto x = random_vector(5, rng, 2.0);
      const auto E = sobolev_ellipsoid(1.0 + rng.uniform(), 5);
      CHECK((project_ellipsoid(x, E) - pg_projection(x, E, 100000)).norm() < 1e-6);
      CHECK((project_ellipsoid(x, E) - oracle::ellipsoid_dual_projection(x, E.axes)).norm() < 1e-6);
    }
  }

  TEST_CASE("projection invariants") {
    RngStream rng(42, 0);
    const auto E = sobolev_ellipsoid(1.2, 30);
    for (int k = 0; k < 100; ++k) {
      const auto x = random_vector(30, rng, 1.5);
      const auto y = random_vector(30, rng, 1.5);
      const auto r = project_ellipsoid_report(x, E);
      CHECK(r.kkt_residual < 1e-10);
      CHECK(E.contains(r.point, 1e-10));
      CHECK((project_ellipsoid(r.point, E) - r.point).norm() < 1e-12);
      CHECK((r.point - project_ellipsoid(y, E)).norm() <= (x - y).norm() + 1e-12);
    }
  }

  TEST_CASE("widths") {
    CHECK(sobolev_dudley_sum_limit(1.5) == doctest::Approx(2.0));
    CHECK(sobolev_sharp_width_limit(1.0) == doctest::Approx(std::sqrt(std::numbers::pi * std::numbers::pi / 6)));
    CHECK(sobolev_sharp_width_limit(1.0) == doctest::Approx(1.2825).epsilon(1e-4));
    const auto E = sobolev_ellipsoid(1.0, 1 << 16);
    const auto w = ellipsoid_widths(E);
    CHECK(w.sharp_width == doctest::Approx(std::sqrt(std::pow(sobolev_sharp_width_limit(1.0), 2) - w.tail_sq)));
    CHECK(localized_width(E, 1.0) == doctest::Approx(std::sqrt(5.0) * w.sharp_width));
    for (const double b : {0.55, 0.75, 1.0})
      CHECK(sobolev_dudley_sum_limit(b) == doctest::Approx(1.0 / (1.0 - std::pow(2.0, -(b - 0.5)))).epsilon(1e-6));
  }

  TEST_CASE("c_beta and width moment") {
    const auto c1 = c_beta(1.0);
    CHECK(c1.c == doctest::Approx(1.5 * std::cbrt(4.0)));
    CHECK(c1.C == doctest::Approx(10.52440).epsilon(1e-6));
    CHECK(width_moment_G(1.0, 1.0) == doctest::Approx(c1.C));
    CHECK(width_moment_G(1.0, 0.0) == 0.0);
    CHECK(width_moment_G(2.0, 2.0) / width_moment_G(2.0, 1.0) == doctest::Approx(std::pow(2.0, 3.0 / 8.0)));
    const double r1 = c_beta(0.51).C * std::sqrt(0.02);
    const double r2 = c_beta(0.505).C * std::sqrt(0.01);
    const double r3 = c_beta(0.501).C * std::sqrt(0.002);
    CHECK(r2 / r1 == doctest::Approx(r3 / r2).epsilon(0.05));
    CHECK(c_beta(2.0).C > 0.0);
    // continuity on a grid
    double prev = c_beta(0.6).C;
    for (double b = 0.61; b < 3.0; b += 0.01) {
      const double v = c_beta(b).C;
      CHECK(std::abs(v - prev) < 0.05 * prev);
      prev = v;
    }
  }

  TEST_CASE("erm trials") {
    const auto E = sobolev_ellipsoid(1.0, 64);
    const auto m = ellipsoid_truth(E, "half");
    const auto quiet = erm_mean_from_noise(E, LipschitzMap::identity(), m, Eigen::VectorXd::Zero(64), 100);
    CHECK(quiet.squared_error == 0.0);
    CHECK_THROWS_AS(erm_mean_from_noise(E, LipschitzMap::identity(), Eigen::VectorXd::Constant(64, 1.0),
                                        Eigen::VectorXd::Zero(64), 10),
                    Error);

    RngStream rng(43, 0);
    for (int k = 0; k < 20; ++k) {
      const Eigen::VectorXd noise = random_vector(64, rng, 0.2);
      const auto t = erm_mean_from_noise(E, LipschitzMap::identity(), m, noise, 25);
      const Eigen::VectorXd ybar = m + noise;
      CHECK((t.estimate - project_ellipsoid(ybar, E)).norm() < 1e-12);
      CHECK(t.squared_error <= t.generalization_term + 1e-9);
      // no random feasible candidate fits the sample mean better
      const double fit = (t.estimate - ybar).squaredNorm();
      for (int c = 0; c < 500; ++c) {
        const auto cand = project_ellipsoid(random_vector(64, rng, 0.3), E);
        CHECK(fit <= (cand - ybar).squaredNorm() + 1e-12);
      }
    }
  }

  TEST_CASE("soft clip erm") {
    const auto map = LipschitzMap::soft_clip(0.5);
    CHECK(map.inverse(map.apply(0.3)) == doctest::Approx(0.3));
    CHECK(map.derivative(0.0) == doctest::Approx(1.0));
    const auto E = sobolev_ellipsoid(1.0, 32);
    const auto m = ellipsoid_truth(E, "half");
    RngStream rng(44, 0);
    for (int k = 0; k < 5; ++k) {
      const auto t = erm_mean_trial(E, map, m, 256, NoiseKind::Gaussian, rng);
      CHECK(t.heuristic);
      CHECK(t.squared_error <= t.generalization_term + 1e-6);
    }
  }

  TEST_CASE("ellipsoid rate at n = 4096") {
    const std::size_t n = 4096;
    const auto E = sobolev_ellipsoid(1.0, default_truncation(1.0, n));
    const auto m = ellipsoid_truth(E, "half");
    RngStream rng(45, 0);
    double mse = 0.0;
    for (int k = 0; k < 50; ++k) mse += erm_mean_trial(E, LipschitzMap::identity(), m, n, NoiseKind::Gaussian, rng).squared_error;
    mse /= 50;
    const double ref = std::pow(static_cast<double>(n), -2.0 / 3.0);
    CHECK(mse < 3 * ref);
    CHECK(mse > ref / 3);
  }
}
