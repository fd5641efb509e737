#pragma once

#include <cstdint>

namespace scs {

/// SplitMix64 (Steele, Lea, Flood 2014). The state advances by a fixed odd
/// increment and each output is a bijective finalizer of the state, so the
/// k-th output of a stream is a closed-form function of (seed, k).
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  static constexpr std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ += kGamma;
    return finalize(state_);
  }

  /// Uniform integer in [0, bound), bound > 0. Rejection sampling keeps it unbiased.
  constexpr std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t r = next();
    while (r >= limit) r = next();
    return r % bound;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Seed of the independent substream `index` derived from a master seed.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64::finalize(seed ^ SplitMix64::finalize(index * 0xd1b54a32d192ed03ULL + 0x2545f4914f6cdd1dULL));
}

/// Output `k` (zero-based) of the SplitMix64 stream seeded with `stream_seed`.
constexpr std::uint64_t substream_word(std::uint64_t stream_seed, std::uint64_t k) {
  return SplitMix64::finalize(stream_seed + (k + 1) * SplitMix64::kGamma);
}

}  // namespace scs
