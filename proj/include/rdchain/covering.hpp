#pragma once

#include <cstddef>
#include <vector>

#include "rdchain/metric_space.hpp"

namespace rdchain {

enum class CoverMethod { Exact, Greedy };

/// Balls are closed and centered at points of the space.
struct CoveringReport {
  double radius = 0.0;
  std::size_t count = 0;
  CoverMethod method = CoverMethod::Exact;
  std::vector<std::size_t> centers;
};

struct PackingReport {
  double radius = 0.0;
  std::size_t count = 0;
  bool exact = true;
  std::vector<std::size_t> members;
};

constexpr std::size_t kExactSearchLimit = 24;

/// Radius 0 is accepted and counts distinct points.
CoveringReport covering_number(const FiniteMetricSpace& space, double radius, CoverMethod method);
/// Exact when the space is small enough, greedy otherwise.
CoveringReport covering_number(const FiniteMetricSpace& space, double radius);

/// Largest subset with pairwise distances >= radius. Exact (maximum clique) up
/// to kExactSearchLimit points, otherwise a greedy maximal packing.
PackingReport packing_number(const FiniteMetricSpace& space, double radius);
PackingReport greedy_packing(const FiniteMetricSpace& space, double radius);

}  // namespace rdchain
