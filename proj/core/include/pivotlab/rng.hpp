#pragma once

#include <cstdint>

namespace pivotlab {

__extension__ using uint128 = unsigned __int128;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Identifies one independent random stream. Streams form a tree:
/// master -> trial -> block (or step), so any stream can be regenerated
/// without touching its siblings and results never depend on scheduling.
class StreamKey {
 public:
  constexpr StreamKey() = default;
  explicit constexpr StreamKey(std::uint64_t seed) : value_(mix64(seed + 0x9e3779b97f4a7c15ULL)) {}

  constexpr StreamKey child(std::uint64_t index) const {
    StreamKey k;
    k.value_ = mix64(value_ ^ mix64(index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
    return k;
  }
  constexpr std::uint64_t value() const { return value_; }

 private:
  std::uint64_t value_ = 0;
};

/// Counter-based generator: the i-th draw is a pure function of (key, i).
class CounterRng {
 public:
  explicit constexpr CounterRng(StreamKey key) : key_(key.value()) {}

  constexpr std::uint64_t next() {
    ++counter_;
    return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }
  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1].
  double uniform_open_zero() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }
  /// Uniform on {0, ..., n-1}; n must be positive.
  std::uint64_t below(std::uint64_t n) {
    // Lemire's multiply-and-reject.
    std::uint64_t x = next();
    uint128 m = static_cast<uint128>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        x = next();
        m = static_cast<uint128>(x) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }
  constexpr std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// The stream coordinates of one sampled object, for reproducer lines.
struct SeedRecord {
  std::uint64_t master = 0;
  std::uint64_t trial = 0;
};

}  // namespace pivotlab
