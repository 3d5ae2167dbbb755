#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace survscore {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Stream splitting: the seed of replicate r is mix64(seed, r).
constexpr std::uint64_t mix64(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed + 0x9E3779B97F4A7C15ULL * (stream + 1));
}

/// Counter-based generator: output k is mix64(seed + (k+1) * golden), i.e.
/// SplitMix64. Variates are produced by fixed formulas so that streams are
/// reproducible across standard libraries and languages:
///   uniform()      = (x >> 11) * 2^-53                      in [0, 1)
///   open_uniform() = ((x >> 11) + 0.5) * 2^-53              in (0, 1)
///   exponential(r) = -log(open_uniform()) / r
///   normal()       = Box-Muller on two open uniforms, cosine branch only
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  double open_uniform() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }
  double exponential(double rate) { return -std::log(open_uniform()) / rate; }
  double normal() {
    const double u1 = open_uniform();
    const double u2 = open_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793238462643 * u2);
  }
  bool bernoulli(double q) { return uniform() < q; }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
  }

 private:
  std::uint64_t state_;
};

}  // namespace survscore
