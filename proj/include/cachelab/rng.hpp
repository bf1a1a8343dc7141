#pragma once

#include <cstdint>

namespace cachelab {

/// Counter-split deterministic RNG (splitmix64 core). Every consumer derives
/// its own stream from the root seed and a few tag integers, so placements,
/// library contents and combination rows are reproducible and independent of
/// evaluation order.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Unbiased uniform draw from [0, n).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t x = next();
      if (x >= threshold) return x % n;
    }
  }

  static std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    v *= 0x9E3779B97F4A7C15ull;
    v ^= v >> 32;
    h ^= v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    return h;
  }

  /// Derived stream for (tag, a, b), independent of draws on this stream.
  SplitRng split(std::uint64_t tag, std::uint64_t a = 0, std::uint64_t b = 0) const {
    std::uint64_t h = state_;
    h = mix(h, tag);
    h = mix(h, a);
    h = mix(h, b);
    return SplitRng(h);
  }

 private:
  std::uint64_t state_;
};

namespace stream_tag {
constexpr std::uint64_t kLibrary = 0x11;
constexpr std::uint64_t kPlacement = 0x22;
constexpr std::uint64_t kRandomRows = 0x33;
constexpr std::uint64_t kTrial = 0x44;
}  // namespace stream_tag

}  // namespace cachelab
