#pragma once

// Seedable, splittable random source with portable sampling primitives.
//
// std::mt19937_64 is bit-exact across implementations, but the standard
// <random> distributions are not; all sampling here is hand-rolled on top of
// the raw 64-bit stream so that a seed fully determines every draw on every
// platform. Streams are split by mixing the parent seed with a stream key
// (splitmix64 finalizer), which is the usual cheap way to derive independent
// generators from one base seed.

#include <cstdint>
#include <random>
#include <vector>

#include "fsprobe/errors.hpp"

namespace fsprobe {

namespace detail {

/// splitmix64 finalizer; good avalanche, used only for seed derivation.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Deterministic random source. Copyable; copies continue independently.
class rng {
 public:
  explicit rng(std::uint64_t seed) : seed_(seed), eng_(seed) {}

  /// Seed this generator was constructed with.
  std::uint64_t seed() const { return seed_; }

  /// Derive an independent stream keyed by `key` (same parent seed + key
  /// always yields the same stream).
  rng split(std::uint64_t key) const {
    return rng(detail::mix64(seed_ ^ detail::mix64(key)));
  }

  /// Raw 64 uniform bits.
  std::uint64_t next_u64() { return eng_(); }

  /// Uniform integer in [0, bound). bound must be >= 1.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw bad_param("rng::below: bound must be positive");
    if (bound == 1) return 0;
    // Masked rejection: unbiased and portable.
    std::uint64_t mask = ~std::uint64_t{0} >> __builtin_clzll(bound - 1 | 1);
    for (;;) {
      std::uint64_t v = eng_() & mask;
      if (v < bound) return v;
    }
  }

  /// Uniform integer in [lo, hi] inclusive.
  long long uniform_int(long long lo, long long hi) {
    if (lo > hi) throw bad_param("rng::uniform_int: empty range");
    return lo + static_cast<long long>(
                    below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform_real() { return (eng_() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform_real(double lo, double hi) {
    return lo + (hi - lo) * uniform_real();
  }

  /// `count` distinct values sampled uniformly from {0, 1, ..., pop-1},
  /// in sampled order (partial Fisher-Yates). count must be <= pop.
  std::vector<long long> sample_distinct(long long pop, long long count) {
    if (count < 0 || count > pop)
      throw bad_param("rng::sample_distinct: count must be in [0, pop]");
    std::vector<long long> ix(static_cast<std::size_t>(pop));
    for (long long v = 0; v < pop; ++v) ix[static_cast<std::size_t>(v)] = v;
    std::vector<long long> out;
    out.reserve(static_cast<std::size_t>(count));
    for (long long k = 0; k < count; ++k) {
      long long j = k + static_cast<long long>(
                            below(static_cast<std::uint64_t>(pop - k)));
      std::swap(ix[static_cast<std::size_t>(k)],
                ix[static_cast<std::size_t>(j)]);
      out.push_back(ix[static_cast<std::size_t>(k)]);
    }
    return out;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
};

}  // namespace fsprobe
