#pragma once

#include <cstdint>

namespace twinimg {

/// splitmix64 finalizer; used both as the generator step and to derive
/// per-(run, arm) stream seeds so results cannot depend on the parallel
/// schedule.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Counter-based generator: the state advances by a fixed increment, so
/// jump-ahead is a single addition.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Initial state for exposure (run, arm). arm 0 carries the base absorption,
/// arm 1 the defect scan.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t run, std::uint64_t arm) {
  return mix64(mix64(seed ^ 0x6A09E667F3BCC909ull) + (run << 1 | (arm & 1)));
}

}  // namespace twinimg
