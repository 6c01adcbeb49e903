#include "rdchain/types.hpp"

#include <bit>
#include <cmath>
#include <limits>

#include "rdchain/blahut_arimoto.hpp"
#include "rdchain/error.hpp"

namespace rdchain {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;  // exact: r * (n-k+i) is divisible by i
  return r;
}

std::vector<std::vector<std::size_t>> enumerate_types(std::size_t n, std::size_t N) {
  std::vector<std::vector<std::size_t>> out;
  if (n == 0) return out;
  std::vector<std::size_t> cur(n, 0);
  auto rec = [&](auto&& self, std::size_t pos, std::size_t left) -> void {
    if (pos + 1 == n) {
      cur[pos] = left;
      out.push_back(cur);
      return;
    }
    for (std::size_t c = 0; c <= left; ++c) {
      cur[pos] = c;
      self(self, pos + 1, left - c);
    }
  };
  rec(rec, 0, N);
  return out;
}

TypeClassReport type_class_report(const std::vector<double>& mu, const std::vector<double>& nu, std::size_t N) {
  if (mu.size() != nu.size() || mu.empty()) fail(ErrorKind::InvalidArgument, "mu and nu must have the same nonzero length");
  if (N == 0) fail(ErrorKind::InvalidType, "sequence length must be positive");
  TypeClassReport rep;
  rep.n = mu.size();
  rep.N = N;
  rep.nu = nu;
  rep.type_count = binomial(rep.n + N - 1, rep.n - 1);

  std::vector<std::size_t> counts(rep.n);
  std::size_t total = 0;
  for (std::size_t i = 0; i < rep.n; ++i) {
    const double c = nu[i] * static_cast<double>(N);
    const double r = std::round(c);
    if (nu[i] < 0.0 || std::abs(c - r) > 1e-9) fail(ErrorKind::InvalidType, "N * nu is not a nonnegative integer vector");
    counts[i] = static_cast<std::size_t>(r);
    total += counts[i];
  }
  if (total != N) fail(ErrorKind::InvalidType, "type counts do not sum to N");

  double log_mass = std::lgamma(static_cast<double>(N) + 1.0);
  double div = 0.0;
  bool null_hit = false;
  for (std::size_t i = 0; i < rep.n; ++i) {
    log_mass -= std::lgamma(static_cast<double>(counts[i]) + 1.0);
    if (counts[i] == 0) continue;
    if (mu[i] <= 0.0) {
      null_hit = true;
      continue;
    }
    log_mass += static_cast<double>(counts[i]) * std::log(mu[i]);
    const double q = static_cast<double>(counts[i]) / static_cast<double>(N);
    div += q * std::log(q / mu[i]);
  }
  if (null_hit) {
    rep.divergence = std::numeric_limits<double>::infinity();
    return rep;  // all three quantities are 0
  }
  rep.divergence = std::max(0.0, div);
  rep.exact_mass = std::exp(log_mass);
  rep.upper_bound = std::exp(-static_cast<double>(N) * rep.divergence);
  rep.lower_bound = std::exp(-static_cast<double>(rep.n) * std::log(static_cast<double>(N) + 1.0) -
                             static_cast<double>(N) * rep.divergence);
  return rep;
}

TypicalCoverReport typical_covering_smallN(const DiscreteDistribution& mu, double sigma, std::size_t N) {
  if (mu.size() != 2) fail(ErrorKind::SizeLimit, "typical covering is implemented for two-point spaces");
  if (N == 0 || N > 14) fail(ErrorKind::SizeLimit, "sequence length must be in 1..14");
  if (!(sigma >= 0.0)) fail(ErrorKind::InvalidArgument, "sigma must be nonnegative");
  TypicalCoverReport rep;
  RdSolver solver(mu);
  rep.rate_at_sigma = solver.solve_distortion(sigma * sigma, 1e-9).rate;
  rep.rate_at_2sigma = solver.solve_distortion(4.0 * sigma * sigma, 1e-9).rate;

  const double delta = mu.space().dist(0, 1);
  const std::uint32_t total = std::uint32_t{1} << N;
  const double slack = std::pow(static_cast<double>(N), -1.0 / 3.0);
  std::vector<std::uint32_t> typical;
  for (std::uint32_t x = 0; x < total; ++x) {
    const double frac1 = static_cast<double>(std::popcount(x)) / static_cast<double>(N);
    if (std::abs(frac1 - mu[1]) <= slack + 1e-12) typical.push_back(x);
  }
  rep.typical_size = typical.size();
  if (typical.empty()) return rep;

  // d_N(x, y)^2 = delta^2 * Hamming(x, y).
  int radius_h = static_cast<int>(N);
  if (delta > 0.0) {
    const double r2 = 4.0 * static_cast<double>(N) * sigma * sigma / (delta * delta);
    radius_h = static_cast<int>(std::min<double>(static_cast<double>(N), std::floor(r2 + 1e-9)));
  }
  std::vector<bool> covered(typical.size(), false);
  std::size_t remaining = typical.size();
  std::vector<std::size_t> gain(total, 0);
  for (std::uint32_t c = 0; c < total; ++c)
    for (const std::uint32_t x : typical)
      if (std::popcount(c ^ x) <= radius_h) ++gain[c];
  while (remaining > 0) {
    std::uint32_t best = 0;
    for (std::uint32_t c = 1; c < total; ++c)
      if (gain[c] > gain[best]) best = c;
    ++rep.cover_count;
    for (std::size_t i = 0; i < typical.size(); ++i) {
      if (covered[i] || std::popcount(best ^ typical[i]) > radius_h) continue;
      covered[i] = true;
      --remaining;
      for (std::uint32_t c = 0; c < total; ++c)
        if (std::popcount(c ^ typical[i]) <= radius_h) --gain[c];
    }
  }
  rep.log_cover_per_n = std::log(static_cast<double>(rep.cover_count)) / static_cast<double>(N);
  return rep;
}

}  // namespace rdchain
