#pragma once

#include <cstdint>
#include <random>

namespace anb {

// Portable pseudo-random source.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard (w=64, n=312, m=156, r=31, a=0xB5026F5AA96619E9, u=29,
// d=0x5555555555555555, s=17, b=0x71D67FFFEDA60000, t=37,
// c=0xFFF6FFFD00000000, l=43, f=6364136223846793005), seeded with a single
// 64-bit value. The standard library distributions are not portable, so the
// derived draws are defined here:
//   uniform01()  = (next() >> 11) * 2^-53
//   below(b)     = rejection sampling: draw x until x >= (2^64 - b) mod b,
//                  return x mod b
//   bernoulli(p) = uniform01() < p
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = next();
      if (x >= threshold) return x % bound;
    }
  }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer (Steele, Lea, Flood 2014). Used to derive independent
// seeds from structured keys.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace anb
