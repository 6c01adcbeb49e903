#pragma once

#include <Eigen/Dense>

#include "rdchain/metric_space.hpp"

namespace rdchain {

/// X_t = <G, t> for t in a finite subset of R^k and G standard normal. The
/// natural metric of the process is the Euclidean distance between points.
struct LinearProcessSpec {
  Eigen::MatrixXd points;  // one point per row

  explicit LinearProcessSpec(Eigen::MatrixXd pts);
  Eigen::Index size() const noexcept { return points.rows(); }
  Eigen::Index dim() const noexcept { return points.cols(); }
  FiniteMetricSpace metric_space() const { return FiniteMetricSpace::from_points(points); }
};

}  // namespace rdchain
