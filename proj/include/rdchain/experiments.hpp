#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rdchain/ellipsoid.hpp"
#include "rdchain/noise.hpp"
#include "rdchain/rate_fit.hpp"
#include "rdchain/sparse.hpp"

namespace rdchain {

struct TrialRow {
  std::size_t n = 0;
  std::size_t replica = 0;
  std::uint64_t seed = 0;
  double squared_error = 0.0;
  double generalization_term = 0.0;
  bool heuristic = false;
};

struct ExperimentRun {
  std::vector<TrialRow> trials;
  ErmReport report;
  bool heuristic = false;
  /// Largest tail mass sum_{i>D} a_i^2 over the grid (ellipsoid runs only).
  double max_truncation_tail = 0.0;
};

/// Seed of replica `replica` of `experiment`; each trial draws from
/// RngStream(trial_seed(...), 0). The seed does not depend on n, so a replica
/// reuses its draws across the n grid (common random numbers), which removes
/// most of the between-n noise from fitted slopes.
std::uint64_t trial_seed(std::uint64_t seed, const std::string& experiment, std::size_t replica);

std::vector<std::size_t> power_of_two_grid(int lo_exp, int hi_exp);

/// Mean estimation over [-1, 1]: m_hat is the sample mean clipped to the interval.
struct ToyConfig {
  std::vector<std::size_t> ns = power_of_two_grid(6, 14);
  std::size_t replicas = 200;
  double truth = 0.5;
  NoiseKind noise = NoiseKind::Gaussian;
  std::uint64_t seed = 1;
  std::size_t threads = 0;
};
TrialRow toy_trial(double truth, std::size_t n, NoiseKind noise, std::uint64_t seed);
ExperimentRun run_toy(const ToyConfig& cfg);

struct EllipsoidConfig {
  double beta = 1.0;
  std::vector<std::size_t> ns = power_of_two_grid(8, 14);
  std::size_t replicas = 50;
  NoiseKind noise = NoiseKind::Gaussian;
  LipschitzMap map = LipschitzMap::identity();
  std::string truth = "half";
  std::size_t truncation = 0;  // 0 selects default_truncation(beta, n)
  std::uint64_t seed = 1;
  std::size_t threads = 0;
};
ExperimentRun run_ellipsoid(const EllipsoidConfig& cfg);

struct SparseConfig {
  double q = 0.5;
  double r = 1.0;
  std::size_t d = 512;
  std::vector<std::size_t> ns = power_of_two_grid(6, 12);
  std::size_t replicas = 50;
  SparseDesign::Kind design = SparseDesign::Kind::OrthogonalIdentity;
  std::string truth = "zero";
  NoiseKind noise = NoiseKind::Gaussian;
  std::uint64_t seed = 1;
  std::size_t threads = 0;
};
ExperimentRun run_sparse(const SparseConfig& cfg);

/// Fitted C = MSE(n_max) / (R (ln d / n_max)^{(2-q)/2}) and whether
/// MSE(n) <= C R (ln d / n)^{(2-q)/2} + 3 SE at every n.
struct SparseEnvelope {
  double C = 0.0;
  bool holds = true;
  double worst_excess = 0.0;  // max over n of (MSE - bound) / SE
};
SparseEnvelope sparse_envelope(const ErmReport& report, double q, double r, std::size_t d);

/// Header n,replica,seed,squared_error,generalization_term.
void write_trials_csv(const std::string& path, const std::vector<TrialRow>& trials);

}  // namespace rdchain
