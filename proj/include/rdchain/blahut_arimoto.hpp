#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "rdchain/distribution.hpp"

namespace rdchain {

/// One point of the slope parametrization: the channel minimizing
/// I(U;Z) + s E d^2(U,Z).
struct SlopePoint {
  double slope = 0.0;
  double rate = 0.0;          // mutual information of the final channel, nats
  double distortion_sq = 0.0; // E d^2 under the final channel
  double objective = 0.0;     // min over channels of I + s E d^2
  double gap = 0.0;           // estimated objective error at exit
  bool certified = false;     // the dual bound alone is below tolerance
  std::size_t iterations = 0;
  bool monotone = true;       // objective never increased across sweeps
};

struct BaResult {
  double rate = 0.0;
  double distortion_sq = 0.0;
  double slope = 0.0;
  /// Two slope points were mixed to hit the target (a linear piece of R).
  bool time_shared = false;
  std::size_t solves = 0;
  bool monotone = true;
};

/// Solver for a source distribution p over rows and a reproduction alphabet
/// over columns of a squared-distortion matrix.
class RdSolver {
 public:
  RdSolver(std::vector<double> p, Eigen::MatrixXd distortion_sq);
  explicit RdSolver(const DiscreteDistribution& mu);

  SlopePoint solve_slope(double slope, double tolerance);
  BaResult solve_distortion(double target_distortion_sq, double tolerance);

  /// Smallest distortion reachable with rate 0.
  double zero_rate_distortion() const noexcept { return zero_rate_distortion_; }
  double source_entropy() const noexcept { return entropy_; }
  /// Largest slope at which the zero-rate channel is still optimal.
  double critical_slope() const;

  std::size_t max_iterations = 20000;
  std::size_t max_bisections = 60;

 private:
  void iterate(double slope, double tolerance, SlopePoint& out);

  std::vector<double> p_;
  Eigen::MatrixXd d_;          // support rows only
  Eigen::VectorXd row_min_;
  std::vector<double> q_;      // warm start
  double zero_rate_distortion_ = 0.0;
  Eigen::Index zero_rate_letter_ = 0;
  double entropy_ = 0.0;
  double last_slope_ = 0.0;
};

/// Rate in nats at E d^2 <= target, within `tolerance` nats.
BaResult blahut_arimoto(const DiscreteDistribution& mu, double target_distortion_sq, double tolerance = 1e-7);

}  // namespace rdchain
