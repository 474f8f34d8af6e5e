#pragma once

#include <cstdint>
#include <limits>

namespace sdlab {

// SplitMix64 finalizer; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t z);

// Derives a stream key from (seed, row, replication) so that every draw is a
// pure function of its coordinates and parallel execution order is irrelevant.
std::uint64_t stream_key(std::uint64_t seed, std::uint64_t row, std::uint64_t replication);

/// Counter-based generator: the i-th output is mix64(key + (i+1)*gamma).
/// Satisfies UniformRandomBitGenerator, so it plugs into <random> distributions.
class StreamRng {
 public:
  using result_type = std::uint64_t;

  explicit StreamRng(std::uint64_t key) : key_(key) {}
  StreamRng(std::uint64_t seed, std::uint64_t row, std::uint64_t replication)
      : key_(stream_key(seed, row, replication)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform in the open interval (0, 1).
  double uniform();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace sdlab
