#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace vpr {

/// splitmix64 step; also used as a stateless coordinate hash.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Hash a small coordinate tuple into a uniform double in [0,1).
/// Deterministic across platforms; used for procedural textures.
inline double hash_to_unit(uint64_t a, uint64_t b = 0, uint64_t c = 0, uint64_t d = 0) {
  uint64_t h = splitmix64(a ^ splitmix64(b ^ splitmix64(c ^ splitmix64(d))));
  return double(h >> 11) * 0x1.0p-53;
}

/// mt19937_64 wrapper with portable value derivation. std::*_distribution is
/// implementation-defined, so uniforms are mapped from raw 64-bit draws.
class Rng {
public:
  explicit Rng(uint64_t seed) : engine_(splitmix64(seed)) {}

  /// Independent substream: same master seed + distinct stream ids give
  /// uncorrelated, schedule-independent sequences.
  static Rng substream(uint64_t seed, uint64_t stream) {
    return Rng(splitmix64(seed ^ splitmix64(stream * 0x9e3779b97f4a7c15ULL + 1)));
  }

  uint64_t next_u64() { return engine_(); }

  /// Uniform in [0,1), 53-bit resolution.
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). Rejection sampling, unbiased.
  uint64_t uniform_index(uint64_t n) {
    uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % n);
    uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % n;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (no cached spare; one value per call).
  double normal() {
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace vpr
