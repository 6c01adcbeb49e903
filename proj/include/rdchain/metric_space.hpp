#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace rdchain {

/// Finite index set with a full symmetric distance matrix.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace(std::vector<std::string> labels, Eigen::MatrixXd dist,
                    std::optional<Eigen::MatrixXd> embedding = std::nullopt);

  /// Rows of `points` are the coordinates; distances are Euclidean.
  static FiniteMetricSpace from_points(const Eigen::MatrixXd& points);
  static FiniteMetricSpace line(const std::vector<double>& xs);

  std::size_t size() const noexcept { return labels_.size(); }
  double dist(std::size_t i, std::size_t j) const { return dist_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)); }
  const Eigen::MatrixXd& distances() const noexcept { return dist_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  bool has_embedding() const noexcept { return embedding_.has_value(); }
  const Eigen::MatrixXd& embedding() const;
  double diam() const noexcept { return diam_; }
  std::size_t index_of(const std::string& label) const;

  /// Sorted distinct positive pairwise distances.
  std::vector<double> breakpoints() const;

 private:
  std::vector<std::string> labels_;
  Eigen::MatrixXd dist_;
  std::optional<Eigen::MatrixXd> embedding_;
  double diam_ = 0.0;
};

constexpr double kMetricTolerance = 1e-9;

}  // namespace rdchain
