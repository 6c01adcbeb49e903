#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "rdchain/blahut_arimoto.hpp"
#include "rdchain/error.hpp"
#include "rdchain/info.hpp"
#include "rdchain/rd_curve.hpp"
#include "rdchain/rng.hpp"
#include "rdchain/types.hpp"

using namespace rdchain;

namespace {

DiscreteDistribution binary() { return uniform_distribution(share(FiniteMetricSpace::line({0.0, 1.0}))); }

DiscreteDistribution random_measure(RngStream& rng, std::size_t max_points, std::size_t dim = 2) {
  const std::size_t n = 2 + rng.uniform_index(max_points - 1);
  Eigen::MatrixXd X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.cols(); ++j) X(i, j) = rng.normal();
  std::vector<double> w(n);
  for (auto& x : w) x = rng.uniform_open();
  return make_distribution(share(FiniteMetricSpace::from_points(X)), w);
}

DiscreteDistribution discretized_gaussian() {
  std::vector<double> xs(201), w(201);
  for (int i = 0; i < 201; ++i) {
    xs[i] = -5.0 + 0.05 * i;
    w[i] = std::exp(-0.5 * xs[i] * xs[i]);
  }
  return make_distribution(share(FiniteMetricSpace::line(xs)), w);
}

}  // namespace

TEST_SUITE("rate_distortion") {
  TEST_CASE("blahut-arimoto examples") {
    const auto mu = binary();
    CHECK(blahut_arimoto(mu, 0.5).rate == doctest::Approx(0.0));
    CHECK(blahut_arimoto(mu, 0.7).rate == 0.0);
    CHECK(blahut_arimoto(mu, 0.11).rate == doctest::Approx(oracle::binary_uniform_rd(0.11)).epsilon(1e-6));
    CHECK(oracle::binary_uniform_rd(0.11) == doctest::Approx(0.346632).epsilon(1e-6));
    const auto r = blahut_arimoto(mu, 0.2, 1e-9);
    CHECK(r.distortion_sq <= 0.2 + 1e-9);
    CHECK(r.monotone);
    CHECK(blahut_arimoto(discretized_gaussian(), std::exp(-2.0)).rate == doctest::Approx(1.0).epsilon(0.02));
  }

  TEST_CASE("blahut-arimoto agrees with the gaussian closed form") {
    const auto mu = discretized_gaussian();
    const double var = std::pow(sigma_m(mu), 2);
    for (const double f : {0.05, 0.2, 0.5, 0.9}) {
      const double got = blahut_arimoto(mu, f * var).rate;
      CHECK(std::abs(got - oracle::gaussian_rd(var, f * var)) < 0.02);
    }
  }

  TEST_CASE("gaussian_rd") {
    CHECK(gaussian_rd(1.0, 1.0) == 0.0);
    CHECK(gaussian_rd(1.0, std::exp(-2.0)) == doctest::Approx(1.0));
    CHECK(gaussian_rd(1.0, 3.0) == 0.0);
  }

  TEST_CASE("rd_curve examples") {
    const auto space = share(FiniteMetricSpace::line({0.0, 1.0, 4.0}));
    const auto zero = rd_curve(point_mass(space, 2));
    for (const auto& s : zero.samples) CHECK(s.rate == 0.0);

    const auto mu = binary();
    std::vector<double> grid;
    for (int k = 1; k <= 20; ++k) grid.push_back(std::sqrt(0.5) * k / 20.0);
    const auto curve = rd_curve(mu, grid);
    for (const auto& s : curve.samples)
      if (s.sigma * s.sigma <= 0.5) CHECK(std::abs(s.rate - oracle::binary_uniform_rd(s.sigma * s.sigma)) < 1e-3);
    CHECK(curve.samples.back().sigma == doctest::Approx(curve.sigma_m));
  }

  TEST_CASE("rd_curve invariants on random measures") {
    RngStream rng(21, 0);
    for (int k = 0; k < 10; ++k) {
      const auto mu = random_measure(rng, 10);
      const auto curve = rd_curve(mu, {}, 1e-7);
      CHECK(curve.convex_ok);
      for (std::size_t i = 1; i < curve.samples.size(); ++i) CHECK(curve.samples[i].rate <= curve.samples[i - 1].rate);
      for (const auto& s : curve.samples) CHECK(s.rate <= curve.entropy + 1e-9);
      CHECK(curve.samples.back().rate == doctest::Approx(0.0).epsilon(1e-7));
    }
  }

  TEST_CASE("rd_integral against a fine Riemann oracle") {
    CHECK(rd_integral(rd_curve(point_mass(share(FiniteMetricSpace::line({0.0, 1.0})), 0))) == 0.0);
    const double sm = std::sqrt(0.5);
    double ref = 0.0;
    const double h = 1e-4;
    for (double s = 0.5 * h; s < sm; s += h) ref += std::sqrt(oracle::binary_uniform_rd(s * s)) * std::min(h, sm - s + 0.5 * h);
    CHECK(std::abs(rd_integral(rd_curve(binary())) - ref) < 1e-4);
  }

  TEST_CASE("rd_integral is stable under grid refinement") {
    RngStream rng(22, 0);
    for (int k = 0; k < 20; ++k) {
      const auto mu = random_measure(rng, 8);
      const double sm = sigma_m(mu);
      const double coarse = rd_integral(rd_curve(mu, default_sigma_grid(sm, 128)));
      const double fine = rd_integral(rd_curve(mu, default_sigma_grid(sm, 256)));
      CHECK(std::abs(coarse - fine) < 1e-3);
    }
  }

  TEST_CASE("penalized integral sandwich") {
    CHECK(penalized_rd_integral(point_mass(share(FiniteMetricSpace::line({0.0, 1.0})), 1)) == 0.0);
    const auto b = binary();
    const double ratio = penalized_rd_integral(b) / rd_integral(rd_curve(b));
    CHECK(ratio >= 2.0);
    CHECK(ratio <= 4.0);
    RngStream rng(23, 0);
    for (int k = 0; k < 10; ++k) {
      const auto mu = random_measure(rng, 8);
      const double I = rd_integral(rd_curve(mu));
      const double P = penalized_rd_integral(mu);
      CHECK(P >= 2 * I - 1e-3);
      CHECK(P <= 4 * I + 1e-3);
    }
    CHECK_THROWS_AS(penalized_rd_integral(b, {0.01, 0.1, 1.0}), Error);
  }

  TEST_CASE("type classes") {
    CHECK(type_class_report({0.5, 0.5}, {2.0 / 3, 1.0 / 3}, 3).type_count == 4);
    const auto r = type_class_report({0.5, 0.5}, {0.75, 0.25}, 4);
    CHECK(r.exact_mass == doctest::Approx(0.25));
    CHECK(r.lower_bound == doctest::Approx(0.0237).epsilon(1e-3));
    CHECK(r.upper_bound == doctest::Approx(0.5926).epsilon(1e-3));
    CHECK(r.sandwich_holds());
    CHECK(type_class_report({0.25, 0.75}, {0.25, 0.75}, 4).upper_bound == doctest::Approx(1.0));
    CHECK_THROWS_AS(type_class_report({0.5, 0.5}, {0.3, 0.7}, 4), Error);

    for (std::size_t n = 2; n <= 3; ++n)
      for (std::size_t N = 1; N <= 8; ++N)
        for (const auto& counts : enumerate_types(n, N)) {
          std::vector<double> nu(n);
          for (std::size_t i = 0; i < n; ++i) nu[i] = static_cast<double>(counts[i]) / static_cast<double>(N);
          const std::vector<double> mu = n == 2 ? std::vector<double>{0.3, 0.7} : std::vector<double>{0.2, 0.3, 0.5};
          CHECK(type_class_report(mu, nu, N).sandwich_holds());
        }
  }

  TEST_CASE("typical covering illustration") {
    const auto mu = binary();
    const auto r = typical_covering_smallN(mu, std::sqrt(0.11), 10);
    CHECK(r.log_cover_per_n >= r.rate_at_2sigma - 0.35);
    CHECK(r.log_cover_per_n <= r.rate_at_sigma + 0.35);
    double prev = INFINITY;
    for (const double s2 : {0.02, 0.05, 0.11, 0.2, 0.3}) {
      const double v = typical_covering_smallN(mu, std::sqrt(s2), 10).log_cover_per_n;
      CHECK(v <= prev + 1e-12);
      prev = v;
    }
    const auto wide = typical_covering_smallN(mu, 1.0, 8);
    CHECK(wide.rate_at_sigma == 0.0);
    CHECK(wide.cover_count <= 2);
  }
}
