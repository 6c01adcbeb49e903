#include "rdchain/info.hpp"

#include <cmath>

#include "rdchain/error.hpp"

namespace rdchain {

double entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (const double x : p)
    if (x > 0.0) h -= x * std::log(x);
  return h;
}

double entropy(const DiscreteDistribution& mu) { return entropy(mu.weights()); }

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

double kl(const std::vector<double>& nu, const std::vector<double>& mu) {
  if (nu.size() != mu.size()) fail(ErrorKind::InvalidArgument, "kl arguments differ in length");
  double d = 0.0;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    if (nu[i] <= 0.0) continue;
    if (mu[i] <= 0.0) fail(ErrorKind::InfiniteKl, "nu charges point " + std::to_string(i) + " where mu vanishes");
    d += nu[i] * std::log(nu[i] / mu[i]);
  }
  return std::max(d, 0.0);
}

double kl(const DiscreteDistribution& nu, const DiscreteDistribution& mu) { return kl(nu.weights(), mu.weights()); }

}  // namespace rdchain
