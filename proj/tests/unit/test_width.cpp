#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "rdchain/assignment.hpp"
#include "rdchain/constants.hpp"
#include "rdchain/error.hpp"
#include "rdchain/info.hpp"
#include "rdchain/linear_process.hpp"
#include "rdchain/monte_carlo.hpp"
#include "rdchain/width.hpp"

using namespace rdchain;

namespace {

const double kSqrt2OverPi = std::sqrt(2.0 / std::numbers::pi);

LinearProcessSpec symmetric_pair(double t) {
  Eigen::MatrixXd X(2, 1);
  X << -t, t;
  return LinearProcessSpec(X);
}

DiscreteDistribution on(const LinearProcessSpec& p, std::vector<double> w) {
  return make_distribution(share(p.metric_space()), w);
}

}  // namespace

TEST_SUITE("process_width") {
  TEST_CASE("mc_sup examples") {
    RngStream rng(31, 0);
    CHECK(mc_sup(LinearProcessSpec(Eigen::MatrixXd::Zero(1, 3)), 1000, rng).value == 0.0);
    const auto pair = mc_sup(symmetric_pair(2.0), 100000, rng);
    CHECK(std::abs(pair.value - 2.0 * kSqrt2OverPi) < 3 * pair.std_error);
    for (const int n : {4, 16, 64}) {
      const auto e = mc_sup(LinearProcessSpec(Eigen::MatrixXd::Identity(n, n)), 20000, rng);
      CHECK(e.value <= std::sqrt(2.0 * std::log(n)) + 3 * e.std_error);
    }
    CHECK_THROWS_AS(mc_sup(symmetric_pair(1.0), 99, rng), Error);
  }

  TEST_CASE("sup of a subset never exceeds the sup of the set") {
    Eigen::MatrixXd X(6, 3);
    RngStream g(32, 0);
    for (Eigen::Index i = 0; i < 6; ++i)
      for (Eigen::Index j = 0; j < 3; ++j) X(i, j) = g.normal();
    RngStream a(33, 0), b(33, 0);  // same draws
    const double full = mc_sup(LinearProcessSpec(X), 5000, a).value;
    const double part = mc_sup(LinearProcessSpec(X.topRows(3)), 5000, b).value;
    CHECK(part <= full);
  }

  TEST_CASE("width of measure examples") {
    RngStream rng(34, 0);
    const auto p = symmetric_pair(1.0);
    CHECK(width_of_measure(p, on(p, {1.0, 0.0}), 1000, rng).value == doctest::Approx(0.0).epsilon(0.2));
    const auto w = width_of_measure(p, on(p, {1.0, 1.0}), 4096, rng, 100);
    CHECK(std::abs(w.value - kSqrt2OverPi) < 3 * w.std_error + 0.01);
    CHECK(w.value >= 0.0);
    CHECK(w.kind == WidthKind::WMu);
    CHECK_THROWS_AS(width_of_measure(p, on(p, {1.0, 1.0}), 4097, rng), Error);
  }

  TEST_CASE("width of measure dominates explicit couplings and stays below the trace bound") {
    RngStream rng(35, 0);
    for (int k = 0; k < 5; ++k) {
      Eigen::MatrixXd X(5, 2);
      for (Eigen::Index i = 0; i < 5; ++i)
        for (Eigen::Index j = 0; j < 2; ++j) X(i, j) = rng.normal();
      const LinearProcessSpec p(X);
      const auto mu = on(p, {1, 1, 1, 1, 1});
      const auto w = width_of_measure(p, mu, 2048, rng, 50);
      CHECK(w.value >= -3 * w.std_error);
      CHECK(w.value <= trace_sqrt_cov_bound(mu) + 3 * w.std_error);

      // quantile coupling: Z is the point whose first-coordinate rank matches Phi(G_1)
      std::vector<Eigen::Index> order{0, 1, 2, 3, 4};
      std::sort(order.begin(), order.end(), [&](auto a, auto b) { return X(a, 0) < X(b, 0); });
      std::vector<double> vals(20000);
      for (auto& v : vals) {
        Eigen::Vector2d g(rng.normal(), rng.normal());
        const double u = 0.5 * std::erfc(-g(0) / std::sqrt(2.0));
        const auto idx = order[std::min<std::size_t>(4, static_cast<std::size_t>(u * 5.0))];
        v = g.dot(X.row(idx).transpose());
      }
      const auto coupled = mean_se(vals);
      CHECK(w.value >= coupled.mean - 3 * (w.std_error + coupled.se));
    }
  }

  TEST_CASE("trace sqrt covariance") {
    const auto p = symmetric_pair(3.0);
    CHECK(trace_sqrt_cov_bound(on(p, {0.0, 1.0})) == doctest::Approx(0.0));
    CHECK(trace_sqrt_cov_bound(on(p, {1.0, 1.0})) == doctest::Approx(3.0));
    // uniform on e1, e2, e3: cov = I/3 - J/9 with eigenvalues 1/3, 1/3, 0
    const LinearProcessSpec e(Eigen::MatrixXd::Identity(3, 3));
    CHECK(trace_sqrt_cov_bound(on(e, {1, 1, 1})) == doctest::Approx(2.0 / std::sqrt(3.0)));
  }

  TEST_CASE("constants") {
    const auto c = lower_constant();
    CHECK(c.value == doctest::Approx(0.0935918).epsilon(1e-5));
    CHECK(std::abs(c.argmax - 0.23457905) < 1e-5);
    CHECK(lower_constant_objective(c.argmax) >= lower_constant_objective(c.argmax + 0.01));
    CHECK(lower_constant_objective(c.argmax) >= lower_constant_objective(c.argmax - 0.01));
    const auto m = majorizing_constant();
    CHECK(std::abs(m.value - 0.0218988) < 1e-6);
    CHECK(std::abs(m.argmax - 1.4392) < 1e-3);
    CHECK(binary_entropy(0.5) == doctest::Approx(std::log(2.0)));
  }

  TEST_CASE("sandwich examples") {
    RngStream rng(36, 0);
    const auto p = symmetric_pair(1.0);
    const auto pm = sandwich_check(p, on(p, {0.0, 1.0}), 512, rng);
    CHECK(pm.rd_integral == 0.0);
    CHECK(pm.pass());
    const auto s = sandwich_check(p, on(p, {1.0, 1.0}), 4096, rng);
    CHECK(s.width == doctest::Approx(0.7979).epsilon(0.03));
    CHECK(s.pass());
    for (int k = 0; k < 4; ++k) {
      Eigen::MatrixXd X(8, 3);
      for (Eigen::Index i = 0; i < 8; ++i)
        for (Eigen::Index j = 0; j < 3; ++j) X(i, j) = rng.normal();
      const LinearProcessSpec q(X);
      std::vector<double> w(8);
      for (auto& x : w) x = rng.uniform_open();
      CHECK(sandwich_check(q, on(q, w), 1024, rng).pass());
    }
  }

  TEST_CASE("class assignment matches brute force") {
    RngStream rng(37, 0);
    for (int k = 0; k < 200; ++k) {
      const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.uniform_index(6));
      Eigen::MatrixXd v(n, n);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) v(i, j) = rng.normal();
      // identical columns collapse to classes; here every column is its own class
      const std::vector<std::size_t> cap(static_cast<std::size_t>(n), 1);
      std::vector<std::size_t> assign;
      const double got = max_value_class_assignment(v, cap, &assign);
      CHECK(got == doctest::Approx(oracle::brute_force_assignment(v)).epsilon(1e-12));
      std::vector<int> used(static_cast<std::size_t>(n), 0);
      for (const auto a : assign) ++used[a];
      for (const int u : used) CHECK(u == 1);
    }
  }
}
