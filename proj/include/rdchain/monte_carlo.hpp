#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "rdchain/parallel.hpp"
#include "rdchain/rng.hpp"

namespace rdchain {

inline constexpr std::size_t kMcBlock = 2048;

/// Splits `samples` draws into fixed-size blocks; block b draws from its own
/// stream keyed by one value taken from `rng`. fn(begin, end, stream) fills
/// per-sample outputs, so results do not depend on the thread count.
template <typename Fn>
void mc_blocks(std::size_t samples, RngStream& rng, Fn&& fn, std::size_t threads = 0) {
  const std::uint64_t key = rng.next_u64();
  const std::size_t blocks = (samples + kMcBlock - 1) / kMcBlock;
  parallel_for(
      blocks,
      [&](std::size_t b) {
        RngStream stream(key, b);
        const std::size_t begin = b * kMcBlock;
        const std::size_t end = std::min(samples, begin + kMcBlock);
        fn(begin, end, stream);
      },
      threads);
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  double sd = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
  MeanSe out;
  if (xs.empty()) return out;
  double sum = 0.0;
  for (const double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (const double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  out.se = out.sd / std::sqrt(static_cast<double>(xs.size()));
  return out;
}

}  // namespace rdchain
