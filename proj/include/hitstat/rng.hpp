#pragma once

#include <cstdint>

namespace hitstat {

/// SplitMix64: a tiny counter-based 64-bit generator (Steele, Lea, Flood).
/// Bit-exact across platforms, which makes every Monte Carlo result in this
/// library reproducible from (seed, samples, cap) alone. Substreams are
/// derived deterministically from (seed, index), so sampling parallelizes
/// without coordination.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Independent stream for the index-th sample of a run seeded with `seed`.
  static SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mixer(seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
    return SplitMix64(mixer.next());
  }

 private:
  std::uint64_t state_;
};

}  // namespace hitstat
