#include "rdchain/metric_space.hpp"

#include <algorithm>
#include <cmath>

#include "rdchain/error.hpp"

namespace rdchain {

namespace {

std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

}  // namespace

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> labels, Eigen::MatrixXd dist,
                                     std::optional<Eigen::MatrixXd> embedding)
    : labels_(std::move(labels)), dist_(std::move(dist)), embedding_(std::move(embedding)) {
  const auto n = static_cast<Eigen::Index>(labels_.size());
  if (n == 0) fail(ErrorKind::InvalidSpace, "space has no points");
  if (dist_.rows() != n || dist_.cols() != n)
    fail(ErrorKind::InvalidSpace, "distance matrix shape does not match the point count");
  if (!dist_.allFinite()) fail(ErrorKind::InvalidSpace, "non-finite distance");

  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(dist_(i, i)) > kMetricTolerance) fail(ErrorKind::InvalidSpace, "nonzero diagonal");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (dist_(i, j) < 0.0) fail(ErrorKind::InvalidSpace, "negative distance");
      if (std::abs(dist_(i, j) - dist_(j, i)) > kMetricTolerance)
        fail(ErrorKind::InvalidSpace, "distance matrix is not symmetric");
    }
  }
  // Euclidean embeddings satisfy the triangle inequality automatically; they are
  // checked against the matrix below instead.
  if (!embedding_) {
    for (Eigen::Index k = 0; k < n; ++k)
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
          if (dist_(i, j) > dist_(i, k) + dist_(k, j) + kMetricTolerance)
            fail(ErrorKind::InvalidSpace, "triangle inequality violated at (" + std::to_string(i) + ", " +
                                              std::to_string(k) + ", " + std::to_string(j) + ")");
  }

  // Symmetrize exactly so downstream code can rely on dist(i,j) == dist(j,i).
  dist_ = 0.5 * (dist_ + dist_.transpose()).eval();
  dist_.diagonal().setZero();

  if (embedding_) {
    if (embedding_->rows() != n) fail(ErrorKind::InvalidSpace, "embedding row count does not match");
    if (!embedding_->allFinite()) fail(ErrorKind::InvalidSpace, "non-finite embedding");
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (std::abs((embedding_->row(i) - embedding_->row(j)).norm() - dist_(i, j)) > kMetricTolerance)
          fail(ErrorKind::InvalidSpace, "embedding does not reproduce the distances");
  }
  diam_ = dist_.maxCoeff();
}

FiniteMetricSpace FiniteMetricSpace::from_points(const Eigen::MatrixXd& points) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) d(i, j) = (points.row(i) - points.row(j)).norm();
  return FiniteMetricSpace(default_labels(static_cast<std::size_t>(n)), std::move(d), points);
}

FiniteMetricSpace FiniteMetricSpace::line(const std::vector<double>& xs) {
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(xs.size()), 1);
  for (std::size_t i = 0; i < xs.size(); ++i) pts(static_cast<Eigen::Index>(i), 0) = xs[i];
  return from_points(pts);
}

const Eigen::MatrixXd& FiniteMetricSpace::embedding() const {
  if (!embedding_) fail(ErrorKind::InvalidSpace, "space has no embedding");
  return *embedding_;
}

std::size_t FiniteMetricSpace::index_of(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) fail(ErrorKind::UnknownPoint, "no point labelled '" + label + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

std::vector<double> FiniteMetricSpace::breakpoints() const {
  std::vector<double> out;
  const Eigen::Index n = dist_.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (dist_(i, j) > 0.0) out.push_back(dist_(i, j));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace rdchain
