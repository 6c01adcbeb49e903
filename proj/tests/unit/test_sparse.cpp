#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rdchain/error.hpp"
#include "rdchain/quadrature.hpp"
#include "rdchain/sparse.hpp"

using namespace rdchain;

TEST_SUITE("sparse") {
  TEST_CASE("weak lq radius") {
    CHECK(weak_lq_radius(Eigen::VectorXd::Zero(5), 0.5) == 0.0);
    Eigen::VectorXd x(6);
    for (int k = 0; k < 6; ++k) x(k) = (k % 2 ? -1.0 : 1.0) * std::pow(k + 1.0, -2.0);
    CHECK(weak_lq_radius(x, 0.5) == doctest::Approx(1.0));
    RngStream rng(51, 0);
    for (int k = 0; k < 10; ++k) {
      Eigen::VectorXd y(6);
      for (auto& v : y) v = rng.normal();
      const double q = 0.2 + 0.7 * rng.uniform();
      const double exact = weak_lq_radius(y, q);
      const double grid = oracle::weak_lq_radius_grid(y, q);
      CHECK(grid <= exact * (1 + 1e-12));
      CHECK(grid >= exact * (1 - 1e-3));
    }
  }

  TEST_CASE("weak lq projection") {
    const WeakLqSpec spec(0.5, 1.0, 3);
    const Eigen::Vector3d inside(0.5, -0.1, 0.05);
    CHECK((project_weak_lq(inside, spec) - inside).norm() == 0.0);
    CHECK(project_weak_lq(Eigen::VectorXd::Constant(1, 5.0), WeakLqSpec(0.5, 1.0, 1))(0) == doctest::Approx(1.0));

    RngStream rng(52, 0);
    for (int k = 0; k < 25; ++k) {
      const Eigen::Vector3d x(2 * rng.normal(), 2 * rng.normal(), 2 * rng.normal());
      const auto p = project_weak_lq(x, spec);
      const auto g = oracle::weak_lq_grid_projection(x, spec.q, spec.r);
      CHECK((p - x).norm() <= g.distance + 1e-12);
      CHECK((p - x).norm() >= g.distance - g.resolution);
    }
    for (int k = 0; k < 100; ++k) {
      Eigen::VectorXd x(20);
      for (auto& v : x) v = 3 * rng.normal();
      const WeakLqSpec s(0.3 + 0.6 * rng.uniform(), 0.5 + rng.uniform(), 20);
      const auto p = project_weak_lq(x, s);
      CHECK(s.contains(p));
      CHECK((project_weak_lq(p, s) - p).norm() == 0.0);
      for (Eigen::Index i = 0; i < 20; ++i) CHECK(std::abs(p(i)) <= std::abs(x(i)));
    }
  }

  TEST_CASE("sparse erm") {
    const WeakLqSpec spec(0.5, 1.0, 32);
    const auto beta = sparse_truth(spec, "boundary4");
    CHECK(spec.contains(beta));
    RngStream rng(53, 0);
    const auto t = erm_sparse_trial(SparseDesign::orthogonal(), beta, spec, 64, NoiseKind::Gaussian, rng);
    CHECK(t.squared_error >= 0.0);
    CHECK(t.squared_error <= t.generalization_term + 1e-9);
    CHECK_FALSE(t.heuristic);

    Eigen::MatrixXd bad = 2.0 * Eigen::MatrixXd::Ones(4, 2);
    CHECK_THROWS_AS(SparseDesign::custom(bad), Error);
    const auto design = SparseDesign::random_unit_columns(64, 32, rng);
    CHECK_NOTHROW(SparseDesign::custom(design.X));
    const auto h = erm_sparse_trial(design, beta, spec, 64, NoiseKind::Gaussian, rng);
    CHECK(h.heuristic);
    CHECK(h.squared_error <= h.generalization_term + 1e-6);
  }

  TEST_CASE("quantizer") {
    CHECK(quantizer_step(0.5, 1.0, 1.0) == doctest::Approx(1.0 / 9.0));
    const WeakLqSpec spec(0.5, 1.0, 8);
    RngStream rng(54, 0);
    const auto Z = sample_weak_lq(spec, 5000, rng);
    for (Eigen::Index i = 0; i < Z.rows(); ++i) CHECK(spec.contains(Z.row(i).transpose()));
    const double l1 = Z.cwiseAbs().rowwise().sum().mean();
    const auto coarse = quantize_weak_lq(Z, 0.5, 1.0, 1e6);
    CHECK(coarse.U.isZero());
    CHECK(coarse.mean_abs_gap == doctest::Approx(l1));
    double prev_entropy = INFINITY;
    for (int k = 0; k < 8; ++k) {
      const double b = l1 * std::pow(2.0, -3.0 + 0.5 * k);
      const auto r = quantize_weak_lq(Z, 0.5, 1.0, b);
      CHECK(r.mean_abs_gap <= b + 3 * r.gap_se);
      CHECK(r.entropy <= prev_entropy + 1e-12);
      prev_entropy = r.entropy;
      CHECK(((r.U - Z).array().abs() <= Z.array().abs() + 1e-15).all());
    }
  }

  TEST_CASE("f and g envelope") {
    const double ie = std::exp(-1.0);
    CHECK(f_func(ie) == doctest::Approx(ie));
    CHECK(f_func(ie * (1 - 1e-9)) == doctest::Approx(ie).epsilon(1e-6));
    CHECK(f_func(5.0) == doctest::Approx(ie));
    const auto& e = envelope_points();
    CHECK(g_env(2 * e.a2) == doctest::Approx(std::log(2 * e.a2)));
    // one-sided slopes match at the tangency points
    CHECK(std::abs((std::log(1 / e.a1) - 1) - e.slope) < 1e-9);
    CHECK(std::abs(1 / e.a2 - e.slope) < 1e-9);
    for (double x = 1e-4; x < 50; x *= 1.05) {
      CHECK(g_env(x) >= x * std::log(1 / x) - 1e-12);
      CHECK(g_env(x) >= std::log(x) - 1e-12);
    }
    // t * int_0^{1/t} f(1/u^2) du <= 4 f(t)
    for (int i = 0; i < 1000; ++i) {
      const double t = std::pow(10.0, -3.0 + 5.0 * i / 999.0);
      const auto& rule = gauss_legendre(64);
      double integral = 0.0;
      // substitute u = v^2 / t to tame the corner near 0
      for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double v = rule.nodes[j];
        const double u = v * v / t;
        integral += rule.weights[j] * f_func(1 / (u * u)) * 2 * v / t;
      }
      CHECK(t * integral <= 4 * f_func(t) * (1 + 1e-9));
    }
  }

  TEST_CASE("sparse rate bound") {
    CHECK(sparse_rd_bound(0.5, 1.0, 2.0, std::exp(1.0)) <= 1.0);
    CHECK(sparse_rd_bound(0.5, 1.0, 0.1, std::exp(1.0)) == doctest::Approx(std::pow(10.0, 2.0 / 3.0)));
    CHECK(sparse_rd_bound(0.5, 1.0, 0.1, std::exp(1.0)) == doctest::Approx(4.6416).epsilon(1e-4));
    // the integral of sqrt(rate) up to sqrt(E) has the width-moment form
    const double q = 0.5, r = 1.0, d = 100.0;
    for (const double E : {0.01, 0.1, 1.0}) {
      const double upper = std::sqrt(E);
      const double integral = oracle::adaptive_simpson(
          [&](double s) { return std::sqrt(sparse_rd_bound(q, r, s, d)); }, 1e-12, upper, 1e-12);
      const double k = (2 - q) / (2 - 2 * q);
      CHECK(integral == doctest::Approx(k * sparse_width_moment_G(q, r, d, E)).epsilon(1e-6));
    }
  }
}
