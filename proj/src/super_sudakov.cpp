#include "rdchain/super_sudakov.hpp"

#include <cmath>
#include <limits>

#include "rdchain/covering.hpp"
#include "rdchain/error.hpp"
#include "rdchain/monte_carlo.hpp"

namespace rdchain {

SuperSudakovReport super_sudakov_check(const LinearProcessSpec& process, double radius, std::size_t mc_samples,
                                       RngStream& rng, std::size_t threads) {
  if (!(radius > 0.0)) fail(ErrorKind::InvalidArgument, "radius must be positive");
  if (mc_samples < 2) fail(ErrorKind::InvalidArgument, "need at least two samples");
  const FiniteMetricSpace space = process.metric_space();
  const PackingReport pack = packing_number(space, radius);

  SuperSudakovReport rep;
  rep.radius = radius;
  rep.packing = pack.members;
  rep.packing_exact = pack.exact;
  rep.samples = mc_samples;
  rep.sudakov_term = radius / 4.0 * std::sqrt(2.0 * std::log(static_cast<double>(pack.count)));

  const std::size_t n = space.size();
  const std::size_t m = pack.count;
  std::vector<std::vector<std::size_t>> balls(m);
  for (std::size_t s = 0; s < m; ++s)
    for (std::size_t t = 0; t < n; ++t)
      if (space.dist(pack.members[s], t) <= radius / 4.0 + 1e-12) balls[s].push_back(t);

  std::vector<double> sup_all(mc_samples);
  std::vector<std::vector<double>> sup_ball(m, std::vector<double>(mc_samples));
  const Eigen::Index k = process.dim();
  mc_blocks(
      mc_samples, rng,
      [&](std::size_t begin, std::size_t end, RngStream& stream) {
        Eigen::VectorXd g(k);
        for (std::size_t i = begin; i < end; ++i) {
          for (Eigen::Index j = 0; j < k; ++j) g(j) = stream.normal();
          const Eigen::VectorXd x = process.points * g;
          sup_all[i] = x.maxCoeff();
          for (std::size_t s = 0; s < m; ++s) {
            double best = -std::numeric_limits<double>::infinity();
            for (const std::size_t t : balls[s]) best = std::max(best, x(static_cast<Eigen::Index>(t)));
            sup_ball[s][i] = best;
          }
        }
      },
      threads);

  const MeanSe all = mean_se(sup_all);
  rep.sup_mean = all.mean;
  rep.sup_se = all.se;
  rep.min_ball_mean = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < m; ++s) {
    const MeanSe b = mean_se(sup_ball[s]);
    if (b.mean < rep.min_ball_mean) {
      rep.min_ball_mean = b.mean;
      rep.min_ball_se = b.se;
      rep.min_ball_center = pack.members[s];
    }
  }
  std::size_t star = 0;
  while (pack.members[star] != rep.min_ball_center) ++star;
  std::vector<double> diff(mc_samples);
  for (std::size_t i = 0; i < mc_samples; ++i) diff[i] = sup_all[i] - sup_ball[star][i];
  const MeanSe d = mean_se(diff);
  rep.slack = d.mean - rep.sudakov_term;
  rep.slack_se = d.se;
  return rep;
}

}  // namespace rdchain
