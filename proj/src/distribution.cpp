#include "rdchain/distribution.hpp"

#include <cmath>
#include <limits>

#include "rdchain/error.hpp"

namespace rdchain {

DiscreteDistribution::DiscreteDistribution(SpacePtr space, std::vector<double> weights, double normalization)
    : space_(std::move(space)), weights_(std::move(weights)), normalization_(normalization) {
  if (!space_) fail(ErrorKind::InvalidDistribution, "null space");
  if (weights_.size() != space_->size())
    fail(ErrorKind::InvalidDistribution, "weight count does not match the point count");
  double total = 0.0;
  for (const double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) fail(ErrorKind::InvalidDistribution, "weights must be finite and nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) fail(ErrorKind::InvalidDistribution, "weights do not sum to 1");
}

std::vector<std::size_t> DiscreteDistribution::support() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < weights_.size(); ++i)
    if (weights_[i] > 0.0) out.push_back(i);
  return out;
}

DiscreteDistribution make_distribution(SpacePtr space, const std::vector<double>& raw_weights) {
  if (!space) fail(ErrorKind::InvalidDistribution, "null space");
  if (raw_weights.size() != space->size())
    fail(ErrorKind::InvalidDistribution, "expected " + std::to_string(space->size()) + " weights, got " +
                                             std::to_string(raw_weights.size()));
  double total = 0.0;
  for (const double w : raw_weights) {
    if (!std::isfinite(w) || w < 0.0) fail(ErrorKind::InvalidDistribution, "negative or non-finite weight");
    total += w;
  }
  if (!(total > 0.0)) fail(ErrorKind::InvalidDistribution, "all weights are zero");
  std::vector<double> w(raw_weights.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = raw_weights[i] / total;
  // Push the rounding residue onto the largest weight so the sum is 1 to machine precision.
  double sum = 0.0;
  std::size_t largest = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    sum += w[i];
    if (w[i] > w[largest]) largest = i;
  }
  w[largest] += 1.0 - sum;
  return DiscreteDistribution(std::move(space), std::move(w), total);
}

DiscreteDistribution uniform_distribution(SpacePtr space) {
  const std::size_t n = space->size();
  return make_distribution(std::move(space), std::vector<double>(n, 1.0));
}

DiscreteDistribution point_mass(SpacePtr space, std::size_t index) {
  if (index >= space->size()) fail(ErrorKind::UnknownPoint, "point index out of range");
  std::vector<double> w(space->size(), 0.0);
  w[index] = 1.0;
  return DiscreteDistribution(std::move(space), std::move(w));
}

namespace {

double second_moment_about(const DiscreteDistribution& mu, std::size_t t) {
  const auto& sp = mu.space();
  double acc = 0.0;
  for (std::size_t z = 0; z < mu.size(); ++z) {
    if (mu[z] == 0.0) continue;
    const double d = sp.dist(z, t);
    acc += mu[z] * d * d;
  }
  return acc;
}

}  // namespace

std::size_t sigma_m_center(const DiscreteDistribution& mu) {
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < mu.size(); ++t) {
    const double v = second_moment_about(mu, t);
    if (v < best_value) {
      best_value = v;
      best = t;
    }
  }
  return best;
}

double sigma_m(const DiscreteDistribution& mu) {
  return std::sqrt(second_moment_about(mu, sigma_m_center(mu)));
}

std::optional<double> sigma_m_continuous(const DiscreteDistribution& mu) {
  if (!mu.space().has_embedding()) return std::nullopt;
  const Eigen::MatrixXd& pts = mu.space().embedding();
  const Eigen::Map<const Eigen::VectorXd> w(mu.weights().data(), static_cast<Eigen::Index>(mu.size()));
  const Eigen::RowVectorXd mean = w.transpose() * pts;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < pts.rows(); ++i) acc += w(i) * (pts.row(i) - mean).squaredNorm();
  return std::sqrt(acc);
}

}  // namespace rdchain
