#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rdchain/distribution.hpp"

namespace rdchain {

struct TypeClassReport {
  std::size_t n = 0;  // alphabet size
  std::size_t N = 0;  // sequence length
  std::vector<double> nu;
  double exact_mass = 0.0;   // mu^N of the type class of nu
  double lower_bound = 0.0;  // (N+1)^-n exp(-N D(nu||mu))
  double upper_bound = 0.0;  // exp(-N D(nu||mu))
  double divergence = 0.0;   // D(nu||mu), +inf when nu charges a null point of mu
  std::uint64_t type_count = 0;  // |S_N| = C(n+N-1, n-1)
  bool sandwich_holds() const { return lower_bound <= exact_mass * (1 + 1e-12) && exact_mass <= upper_bound * (1 + 1e-12); }
};

/// N * nu must be integral (within 1e-9) or InvalidType is raised.
TypeClassReport type_class_report(const std::vector<double>& mu, const std::vector<double>& nu, std::size_t N);

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);
/// All integer count vectors of length n summing to N, in lexicographic order.
std::vector<std::vector<std::size_t>> enumerate_types(std::size_t n, std::size_t N);

struct TypicalCoverReport {
  double log_cover_per_n = 0.0;  // (1/N) ln(greedy cover count)
  std::size_t cover_count = 0;
  std::size_t typical_size = 0;
  double rate_at_sigma = 0.0;     // R(sigma^2)
  double rate_at_2sigma = 0.0;    // R(4 sigma^2)
};

/// Covers the typical sequences (types within N^{-1/3} of mu) with d_N-balls of
/// radius 2 sqrt(N) sigma centred anywhere in T^N, greedily. Two-point spaces
/// and N <= 14 only. A small-N illustration of the covering/rate relation.
TypicalCoverReport typical_covering_smallN(const DiscreteDistribution& mu, double sigma, std::size_t N);

}  // namespace rdchain
