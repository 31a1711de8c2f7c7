#pragma once

#include <cstdint>

#include "tdscalc/rational.hpp"

namespace tdsc {

/// splitmix64: tiny, deterministic across platforms. Report reproducibility
/// under a fixed seed depends on never touching std:: distributions.
class SplitMix64 {
public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

private:
  uint64_t state_;
};

/// Seeded source of small exact test data.
class Sampler {
public:
  explicit Sampler(uint64_t seed) : rng_(seed) {}

  /// Uniform in [lo, hi] inclusive.
  long long uniform_int(long long lo, long long hi) {
    if (hi < lo) return lo;
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<long long>(rng_.next() % span);
  }

  bool coin() { return (rng_.next() & 1) != 0; }

  /// Small rational with |numerator| <= num_max, denominator in [1, den_max].
  Rational rational(long long num_max = 6, long long den_max = 3) {
    long long n = uniform_int(-num_max, num_max);
    long long d = uniform_int(1, den_max);
    return Rational(n, d);
  }

  Rational nonzero_rational(long long num_max = 6, long long den_max = 3) {
    for (;;) {
      Rational r = rational(num_max, den_max);
      if (r != 0) return r;
    }
  }

  RatVec vector(size_t n, long long num_max = 6, long long den_max = 3) {
    RatVec v(n);
    for (auto& x : v) x = rational(num_max, den_max);
    return v;
  }

  RatVec nonzero_vector(size_t n, long long num_max = 6, long long den_max = 3) {
    for (;;) {
      RatVec v = vector(n, num_max, den_max);
      for (const auto& x : v)
        if (x != 0) return v;
    }
  }

private:
  SplitMix64 rng_;
};

}  // namespace tdsc
