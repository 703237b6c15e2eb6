// rng.hpp
// Counter-based random stream with hierarchical derivation
// (experiment seed -> trial index -> draw index). Counter-based so that
// replaying a config is bit-identical and parallel trials can branch
// without shared state. std::mt19937 & friends are deliberately not used:
// their distributions are not bit-stable across platforms.
#pragma once

#include <cmath>
#include <cstdint>

namespace nogolab {

class RngStream {
 public:
  explicit RngStream(uint64_t seed) : key_(mix(seed ^ 0x9e3779b97f4a7c15ull)) {}

  // Derive an independent child stream (trial/draw branching).
  RngStream child(uint64_t index) const {
    RngStream r(0);
    r.key_ = mix(key_ ^ mix(index + 0x632be59bd9b4e019ull));
    r.ctr_ = 0;
    return r;
  }

  uint64_t next_u64() {
    ++ctr_;
    return mix(key_ + 0x9e3779b97f4a7c15ull * ctr_);
  }

  // Uniform in [0, 1), 53 bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), unbiased (rejection).
  uint64_t below(uint64_t n) {
    if (n <= 1) return 0;
    const uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Standard normal via Box-Muller (no cached second value, so the draw
  // count stays a pure function of the call count).
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  static uint64_t mix(uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  uint64_t key_;
  uint64_t ctr_ = 0;
};

}  // namespace nogolab
