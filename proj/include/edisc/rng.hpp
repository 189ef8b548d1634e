#pragma once

#include <cstdint>
#include <cmath>

namespace edisc {

// Deterministic, portable PRNG. Protocol runs consume exactly one uniform
// per Bernoulli decision so transcripts replay bit-for-bit from a seed.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(splitmix64(seed ^ 0x9E3779B97F4A7C15ULL)) {
    // warm up so nearby seeds decorrelate
    for (int i = 0; i < 4; ++i) next_u64();
  }

  uint64_t next_u64() {
    // xorshift64*
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1DULL;
  }

  // uniform in [0,1)
  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Box-Muller, two uniforms per call (no cached spare, keeps the stream simple)
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  // integer in [0, n)
  uint64_t below(uint64_t n) {
    // modulo bias is negligible for n << 2^64
    return next_u64() % n;
  }

  static uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

 private:
  uint64_t state_;
};

// Documented fan-out: trial i of a campaign with root seed r runs with
// split_seed(r, i). Campaigns parallelize deterministically through this.
inline uint64_t split_seed(uint64_t root, uint64_t i) {
  return Rng::splitmix64(root + 0x9E3779B97F4A7C15ULL * (i + 1));
}

}  // namespace edisc
