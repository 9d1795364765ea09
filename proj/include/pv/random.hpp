// Deterministic random number utilities.
//
// Every stochastic choice in the library flows through SplitMix64 rather
// than <random> distributions, whose output is implementation-defined.
// Identical seeds therefore give bit-identical results on any platform.

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <utility>
#include <vector>

namespace pv {

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

// Derives an independent child seed from a parent seed and a path of
// indices. Grid cells (noise degree i, repetition j) each get their own
// stream via derive_seed(master, {i, j}).
constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                    std::initializer_list<std::uint64_t> path) noexcept {
  for (std::uint64_t p : path)
    seed = mix64(seed ^ mix64(p + 0x9e3779b97f4a7c15ULL));
  return seed;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [0, bound). Unbiased masked rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound < 2) return 0;
    const std::uint64_t mask = ~std::uint64_t{0} >> std::countl_zero(bound - 1);
    for (;;) {
      const std::uint64_t v = next_u64() & mask;
      if (v < bound) return v;
    }
  }

  // Standard normal via Box-Muller. One value per call; the sine branch
  // is discarded to keep the stream position independent of call parity.
  double next_gaussian() {
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

// Fisher-Yates.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[rng.next_below(i)]);
}

// Partial Fisher-Yates: after the call the first m entries of v are a
// uniform sample without replacement. For a fixed rng stream the selected
// prefix is itself a prefix of the selection for any larger m, which is
// what makes nested subsamples possible.
template <typename T>
void sample_prefix(std::vector<T>& v, std::size_t m, Rng& rng) {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < m && i + 1 < n; ++i)
    std::swap(v[i], v[i + rng.next_below(n - i)]);
}

}  // namespace pv
