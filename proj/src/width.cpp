#include "rdchain/width.hpp"

#include <algorithm>
#include <cmath>

#include "rdchain/assignment.hpp"
#include "rdchain/constants.hpp"
#include "rdchain/error.hpp"
#include "rdchain/monte_carlo.hpp"
#include "rdchain/rd_curve.hpp"

namespace rdchain {

WidthEstimate mc_sup(const LinearProcessSpec& process, std::size_t n_samples, RngStream& rng, std::size_t threads) {
  if (n_samples < 100) fail(ErrorKind::InvalidArgument, "mc_sup needs at least 100 samples");
  std::vector<double> sups(n_samples);
  const Eigen::Index k = process.dim();
  mc_blocks(
      n_samples, rng,
      [&](std::size_t begin, std::size_t end, RngStream& stream) {
        Eigen::VectorXd g(k);
        for (std::size_t i = begin; i < end; ++i) {
          for (Eigen::Index j = 0; j < k; ++j) g(j) = stream.normal();
          sups[i] = (process.points * g).maxCoeff();
        }
      },
      threads);
  const MeanSe m = mean_se(sups);
  return {m.mean, m.se, n_samples, WidthKind::SupT};
}

namespace {

std::size_t draw_categorical(const std::vector<double>& cdf, RngStream& rng) {
  const double u = rng.uniform() * cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

double coupling_value(const Eigen::MatrixXd& inner, const std::vector<std::size_t>& rows,
                      const std::vector<std::size_t>& classes, std::size_t k) {
  const std::size_t n = rows.size();
  Eigen::MatrixXd v(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < n; ++i) v.row(static_cast<Eigen::Index>(i)) = inner.row(static_cast<Eigen::Index>(rows[i]));
  std::vector<std::size_t> cap(k, 0);
  for (const std::size_t c : classes) ++cap[c];
  return max_value_class_assignment(v, cap) / static_cast<double>(n);
}

}  // namespace

WidthEstimate width_of_measure(const LinearProcessSpec& process, const DiscreteDistribution& mu,
                               std::size_t n_samples, RngStream& rng, std::size_t bootstrap, std::size_t threads) {
  if (n_samples > kMaxCouplingPairs)
    fail(ErrorKind::SizeLimit, "at most " + std::to_string(kMaxCouplingPairs) + " coupling pairs");
  if (n_samples < 2) fail(ErrorKind::InvalidArgument, "need at least two coupling pairs");
  if (static_cast<Eigen::Index>(mu.size()) != process.size())
    fail(ErrorKind::InvalidArgument, "mu must live on the process points");

  const std::vector<std::size_t> support = mu.support();
  const std::size_t k = support.size();
  std::vector<double> cdf(k);
  double acc = 0.0;
  for (std::size_t c = 0; c < k; ++c) cdf[c] = (acc += mu[support[c]]);

  Eigen::MatrixXd support_points(static_cast<Eigen::Index>(k), process.dim());
  for (std::size_t c = 0; c < k; ++c)
    support_points.row(static_cast<Eigen::Index>(c)) = process.points.row(static_cast<Eigen::Index>(support[c]));

  Eigen::MatrixXd gauss(static_cast<Eigen::Index>(n_samples), process.dim());
  std::vector<std::size_t> classes(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i)
    for (Eigen::Index j = 0; j < process.dim(); ++j) gauss(static_cast<Eigen::Index>(i), j) = rng.normal();
  for (std::size_t i = 0; i < n_samples; ++i) classes[i] = draw_categorical(cdf, rng);
  const Eigen::MatrixXd inner = gauss * support_points.transpose();

  std::vector<std::size_t> rows(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) rows[i] = i;
  WidthEstimate est;
  est.kind = WidthKind::WMu;
  est.samples = n_samples;
  est.value = coupling_value(inner, rows, classes, k);

  if (bootstrap >= 2) {
    const std::uint64_t key = rng.next_u64();
    const std::vector<double> boot = parallel_map<double>(
        bootstrap,
        [&](std::size_t b) {
          RngStream stream(key, b);
          std::vector<std::size_t> r(n_samples);
          std::vector<std::size_t> cl(n_samples);
          for (std::size_t i = 0; i < n_samples; ++i) r[i] = stream.uniform_index(n_samples);
          for (std::size_t i = 0; i < n_samples; ++i) cl[i] = classes[stream.uniform_index(n_samples)];
          return coupling_value(inner, r, cl, k);
        },
        threads);
    est.std_error = mean_se(boot).sd;
  }
  return est;
}

TraceSqrtReport trace_sqrt_cov_report(const DiscreteDistribution& mu) {
  const Eigen::MatrixXd& pts = mu.space().embedding();
  const Eigen::Map<const Eigen::VectorXd> w(mu.weights().data(), static_cast<Eigen::Index>(mu.size()));
  const Eigen::RowVectorXd mean = w.transpose() * pts;
  const Eigen::MatrixXd centered = pts.rowwise() - mean;
  const Eigen::MatrixXd cov = centered.transpose() * w.asDiagonal() * centered;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (cov + cov.transpose()));
  TraceSqrtReport rep;
  rep.min_eigenvalue = eig.eigenvalues().minCoeff();
  rep.clipped = rep.min_eigenvalue < -1e-9;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) rep.value += std::sqrt(std::max(0.0, eig.eigenvalues()(i)));
  return rep;
}

double trace_sqrt_cov_bound(const DiscreteDistribution& mu) { return trace_sqrt_cov_report(mu).value; }

SandwichReport sandwich_check(const LinearProcessSpec& process, const DiscreteDistribution& mu,
                              std::size_t n_samples, RngStream& rng, std::size_t bootstrap, std::size_t threads) {
  SandwichReport rep;
  const DiscreteDistribution on_process(share(process.metric_space()), mu.weights());
  rep.rd_integral = rd_integral(rd_curve(on_process));
  const WidthEstimate w = width_of_measure(process, on_process, n_samples, rng, bootstrap, threads);
  rep.width = w.value;
  rep.width_se = w.std_error;
  rep.lower = lower_constant().value * rep.rd_integral;
  rep.upper = kUpperConstant * rep.rd_integral;
  rep.lower_ok = rep.width >= rep.lower - 3.0 * rep.width_se;
  rep.upper_ok = rep.width <= rep.upper + 3.0 * rep.width_se;
  return rep;
}

}  // namespace rdchain
