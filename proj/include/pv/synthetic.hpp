// Two-dimensional synthetic classification benchmarks: interleaving half
// circles, concentric circles, and two linearly separable Gaussian blobs.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pv/dataset.hpp"
#include "pv/format.hpp"
#include "pv/random.hpp"

namespace pv {

enum class SyntheticFamily { moon, circle, linear };

inline std::string to_string(SyntheticFamily f) {
  switch (f) {
    case SyntheticFamily::moon: return "moon";
    case SyntheticFamily::circle: return "circle";
    case SyntheticFamily::linear: return "linear";
  }
  throw std::invalid_argument("unknown synthetic family");
}

inline SyntheticFamily synthetic_family_from_string(const std::string& s) {
  if (s == "moon") return SyntheticFamily::moon;
  if (s == "circle") return SyntheticFamily::circle;
  if (s == "linear") return SyntheticFamily::linear;
  throw std::invalid_argument("unknown synthetic family '" + s + "'");
}

struct SyntheticSpec {
  SyntheticFamily family = SyntheticFamily::moon;
  std::size_t n_samples = 100;
  double feature_noise = 0.0;  // std-dev of Gaussian jitter on coordinates
  std::uint64_t seed = 0;
};

namespace detail {

// Inner-to-outer radius ratio for the circle family.
inline constexpr double kCircleFactor = 0.5;
// Blob centers for the linear family; intrinsic spread is one unit.
inline constexpr double kBlobOffset = 2.0;

}  // namespace detail

// Balanced two-class, two-feature sample. Class 0 rows come first. With
// feature_noise == 0 the moon and circle families lie exactly on their
// canonical curves; the linear family is a pair of unit-variance Gaussian
// blobs (its spread is intrinsic geometry, not jitter).
inline Dataset generate(const SyntheticSpec& spec) {
  if (spec.n_samples < 4)
    throw std::invalid_argument("generate: n_samples must be >= 4");
  if (!(spec.feature_noise >= 0.0))
    throw std::invalid_argument("generate: feature_noise must be >= 0");

  const std::size_t n = spec.n_samples;
  const std::size_t n0 = n / 2;
  const std::size_t n1 = n - n0;
  constexpr double pi = std::numbers::pi;

  Dataset out;
  out.name = to_string(spec.family);
  if (spec.feature_noise > 0.0) out.name += "-" + format_double(spec.feature_noise);
  out.class_count = 2;
  out.features = Matrix(n, 2);
  out.labels.assign(n, 0);
  std::fill(out.labels.begin() + static_cast<std::ptrdiff_t>(n0),
            out.labels.end(), 1);

  Rng rng(spec.seed);
  switch (spec.family) {
    case SyntheticFamily::moon:
      // Outer arc t in [0, pi]; inner arc shifted and flipped.
      for (std::size_t i = 0; i < n0; ++i) {
        const double t = pi * static_cast<double>(i) / static_cast<double>(n0 - 1);
        out.features.at(i, 0) = std::cos(t);
        out.features.at(i, 1) = std::sin(t);
      }
      for (std::size_t i = 0; i < n1; ++i) {
        const double t = pi * static_cast<double>(i) / static_cast<double>(n1 - 1);
        out.features.at(n0 + i, 0) = 1.0 - std::cos(t);
        out.features.at(n0 + i, 1) = 0.5 - std::sin(t);
      }
      break;
    case SyntheticFamily::circle:
      for (std::size_t i = 0; i < n0; ++i) {
        const double t = 2.0 * pi * static_cast<double>(i) / static_cast<double>(n0);
        out.features.at(i, 0) = std::cos(t);
        out.features.at(i, 1) = std::sin(t);
      }
      for (std::size_t i = 0; i < n1; ++i) {
        const double t = 2.0 * pi * static_cast<double>(i) / static_cast<double>(n1);
        out.features.at(n0 + i, 0) = detail::kCircleFactor * std::cos(t);
        out.features.at(n0 + i, 1) = detail::kCircleFactor * std::sin(t);
      }
      break;
    case SyntheticFamily::linear:
      for (std::size_t i = 0; i < n; ++i) {
        const double center = (i < n0) ? -detail::kBlobOffset : detail::kBlobOffset;
        out.features.at(i, 0) = center + rng.next_gaussian();
        out.features.at(i, 1) = center + rng.next_gaussian();
      }
      break;
  }

  if (spec.feature_noise > 0.0) {
    for (double& v : out.features.values)
      v += spec.feature_noise * rng.next_gaussian();
  }

  out.ensure_valid();
  return out;
}

}  // namespace pv
