#pragma once

// Seeded generators shared by the catalog audit and the sampler.

#include <cstdint>
#include <random>
#include <string_view>

#include "qaw/scalar.hpp"

namespace qaw {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(splitmix64(seed)) {}

  /// Independent stream keyed by a label; does not disturb this stream.
  Rng substream(std::string_view label) const { return Rng(splitmix64(seed_ ^ fnv1a(label))); }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(gen_); }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

/// Nonzero p/r with |p|, r <= bound.
inline Exact small_rational(Rng& rng, int bound = 97) {
  for (;;) {
    const int p = rng.integer(-bound, bound);
    if (p == 0) continue;
    return Exact::from_ratio(p, rng.integer(1, bound));
  }
}

/// Small-denominator Gaussian rational; purely real with probability 1 - p_complex.
inline Exact small_gaussian(Rng& rng, int bound = 97, double p_complex = 0.3) {
  Exact re = small_rational(rng, bound);
  if (!rng.coin(p_complex)) return re;
  return Exact(re.re(), small_rational(rng, bound).re());
}

}  // namespace qaw
