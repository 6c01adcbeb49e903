#pragma once

#include <cstddef>

#include "rdchain/distribution.hpp"
#include "rdchain/linear_process.hpp"
#include "rdchain/rng.hpp"

namespace rdchain {

enum class WidthKind { SupT, WMu };

struct WidthEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  WidthKind kind = WidthKind::SupT;
};

/// Mean of max_t <G, t> over n_samples draws (n_samples >= 100).
WidthEstimate mc_sup(const LinearProcessSpec& process, std::size_t n_samples, RngStream& rng,
                     std::size_t threads = 0);

inline constexpr std::size_t kMaxCouplingPairs = 4096;

/// Empirical maximal-correlation coupling: n Gaussian draws and n i.i.d. draws
/// from mu, optimally matched to maximize the mean inner product. The error is
/// the spread of the same estimate over `bootstrap` resamples of both samples.
WidthEstimate width_of_measure(const LinearProcessSpec& process, const DiscreteDistribution& mu,
                               std::size_t n_samples, RngStream& rng, std::size_t bootstrap = 50,
                               std::size_t threads = 0);

struct TraceSqrtReport {
  double value = 0.0;           // sum of sqrt of the eigenvalues of cov(Z)
  double min_eigenvalue = 0.0;
  bool clipped = false;         // an eigenvalue below -1e-9 was set to 0
};

TraceSqrtReport trace_sqrt_cov_report(const DiscreteDistribution& mu);
double trace_sqrt_cov_bound(const DiscreteDistribution& mu);

struct SandwichReport {
  double rd_integral = 0.0;
  double width = 0.0;
  double width_se = 0.0;
  double lower = 0.0;  // c * integral
  double upper = 0.0;  // 48 * integral
  bool lower_ok = true;
  bool upper_ok = true;
  bool pass() const { return lower_ok && upper_ok; }
};

/// c * I - 3 SE <= w(mu) <= 48 * I + 3 SE, where I is the rate-distortion
/// integral of mu on the process's metric.
SandwichReport sandwich_check(const LinearProcessSpec& process, const DiscreteDistribution& mu,
                              std::size_t n_samples, RngStream& rng, std::size_t bootstrap = 50,
                              std::size_t threads = 0);

}  // namespace rdchain
