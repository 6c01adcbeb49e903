#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "rdchain/metric_space.hpp"

namespace rdchain {

using SpacePtr = std::shared_ptr<const FiniteMetricSpace>;

inline SpacePtr share(FiniteMetricSpace space) {
  return std::make_shared<const FiniteMetricSpace>(std::move(space));
}

class DiscreteDistribution {
 public:
  DiscreteDistribution(SpacePtr space, std::vector<double> weights, double normalization = 1.0);

  const FiniteMetricSpace& space() const noexcept { return *space_; }
  const SpacePtr& space_ptr() const noexcept { return space_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::size_t size() const noexcept { return weights_.size(); }
  /// Sum of the raw weights this distribution was normalized from.
  double normalization() const noexcept { return normalization_; }
  std::vector<std::size_t> support() const;

 private:
  SpacePtr space_;
  std::vector<double> weights_;
  double normalization_;
};

DiscreteDistribution make_distribution(SpacePtr space, const std::vector<double>& raw_weights);
DiscreteDistribution uniform_distribution(SpacePtr space);
DiscreteDistribution point_mass(SpacePtr space, std::size_t index);

/// min over points t of the space of sqrt(sum_z mu(z) d(z,t)^2).
double sigma_m(const DiscreteDistribution& mu);
std::size_t sigma_m_center(const DiscreteDistribution& mu);

/// Same quantity with the center free to move in the embedding; the minimizer is
/// the mean of mu. Empty when the space has no embedding.
std::optional<double> sigma_m_continuous(const DiscreteDistribution& mu);

}  // namespace rdchain
