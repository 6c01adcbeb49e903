#pragma once

#include <vector>

#include "rdchain/distribution.hpp"

namespace rdchain {

/// Natural-log entropies with 0 ln 0 = 0.
double entropy(const std::vector<double>& p);
double entropy(const DiscreteDistribution& mu);
double binary_entropy(double p);

/// D(nu || mu). Throws InfiniteKl when nu charges a point mu does not.
double kl(const std::vector<double>& nu, const std::vector<double>& mu);
double kl(const DiscreteDistribution& nu, const DiscreteDistribution& mu);

}  // namespace rdchain
