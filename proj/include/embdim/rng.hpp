#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace embdim {

// splitmix64 finalizer (Steele, Lea & Flood).
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based keyed random stream. A stream is identified by a 64-bit key;
// child streams are derived from (key, id) so that independent trials can be
// seeded as (seed, trial) or (seed, m, trial) without any draw-order coupling.
// All draws are bit-reproducible for a given key.
class KeyedRng {
 public:
  explicit KeyedRng(std::uint64_t key) : state_(mix64(key + 0x9e3779b97f4a7c15ULL)) {}

  // Child stream keyed by (this stream's key, id).
  KeyedRng derive(std::uint64_t id) const {
    return KeyedRng(mix64(state_ ^ 0xd1342543de82ef95ULL) + id);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  // Uniform on (0, 1]; never returns 0, so it is safe under log().
  double next_unit() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the second variate of each pair is cached.
  double next_gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  // Uniform integer on [0, n), n >= 1. Lemire's debiased multiply-shift.
  std::uint64_t next_below(std::uint64_t n) {
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t threshold = (0ULL - n) % n;
      while (lo < threshold) {
        x = next_u64();
        m = static_cast<__uint128_t>(x) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace embdim
