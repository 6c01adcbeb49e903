#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "rdchain/distribution.hpp"
#include "rdchain/rng.hpp"

namespace rdchain {

inline constexpr double kDudleyConstant = 24.0;
inline const double kDudleyConstantSharp = 4.0 * std::sqrt(2.0);

/// K * integral over [0, diam] of sqrt(ln N(T, lambda)), evaluated exactly as a
/// sum over the breakpoints of the covering step function. Coverings are exact
/// up to kExactSearchLimit points and greedy (an upper bound) beyond.
double dudley_integral(const FiniteMetricSpace& space, double constant_k = kDudleyConstant);

/// sqrt(max(ln x, 0)).
inline double sqrt_log_plus(double x) { return x > 1.0 ? std::sqrt(std::log(x)) : 0.0; }

/// Integral over [0, diam] of sqrt(ln 1/mu(B(t, lambda))) with closed balls.
/// Infinite when t is outside the support of mu.
double ball_mass_functional(const DiscreteDistribution& mu, std::size_t t);

struct ChainingFunctionals {
  double dudley_value = 0.0;   // K = 1
  double gamma2_upper = 0.0;   // sup_t I_mu(t) for the best mu found
  double delta2_lower = 0.0;   // inf over T of I_mu'(t) for the best mu' found
  std::vector<double> measure_used;
  std::vector<double> delta_measure;
  std::size_t evaluations = 0;
};

/// Heuristic search over measures by exponentiated-gradient steps with random
/// restarts. The incumbent is kept, so reported values only improve.
ChainingFunctionals gamma2_search(const FiniteMetricSpace& space, std::size_t iterations, RngStream& rng,
                                  std::size_t restarts = 4);

}  // namespace rdchain
