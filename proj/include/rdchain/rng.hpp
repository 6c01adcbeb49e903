#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace rdchain {

/// Counter-based random stream.
///
/// Draw number k of stream (seed, stream_id) is a keyed hash of k, so a stream
/// is fully described by (seed, stream_id, counter) and never shares state with
/// another stream. Two rounds of the splitmix64 finalizer with independent keys
/// are used as the hash. Normal variates use Box-Muller so that output is
/// identical across standard libraries.
///
/// Satisfies UniformRandomBitGenerator, so it can also drive <random>
/// distributions when bit-exact portability is not needed.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return next_u64(); }
  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1], safe to take logs of.
  double uniform_open();
  double normal();
  /// Uniform integer on {0, ..., bound - 1}; bound must be positive.
  std::uint64_t uniform_index(std::uint64_t bound);
  double rademacher() { return (next_u64() >> 63) != 0 ? 1.0 : -1.0; }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t key0_;
  std::uint64_t key1_;
  std::uint64_t counter_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

RngStream rng_substream(std::uint64_t seed, std::uint64_t stream_id);

std::uint64_t mix64(std::uint64_t x);

/// Stream id for replica `replica` of experiment `experiment`.
std::uint64_t replica_stream_id(std::uint64_t experiment, std::uint64_t replica);

/// Stable 64-bit FNV-1a hash, used for experiment names and config hashes.
std::uint64_t fnv1a64(std::string_view text);

}  // namespace rdchain
