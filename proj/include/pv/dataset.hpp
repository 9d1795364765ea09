// Core sample container plus stratified split / subsample operations.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pv/random.hpp"

namespace pv {

// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

  std::span<const double> row(std::size_t r) const {
    return {values.data() + r * cols, cols};
  }

  bool operator==(const Matrix&) const = default;
};

// A labelled training sample: n feature rows, n class ids in [0, k).
struct Dataset {
  std::string name;
  Matrix features;
  std::vector<int> labels;
  int class_count = 0;
  // For CSV-loaded data: original label text per class id, in order of
  // first appearance. Empty for generated datasets.
  std::vector<std::string> label_names;

  std::size_t size() const { return features.rows; }
  std::size_t dim() const { return features.cols; }

  std::vector<std::size_t> class_histogram() const {
    std::vector<std::size_t> counts(static_cast<std::size_t>(class_count), 0);
    for (int y : labels) counts[static_cast<std::size_t>(y)]++;
    return counts;
  }

  // Throws std::invalid_argument on any violated invariant.
  void ensure_valid() const {
    if (class_count < 2)
      throw std::invalid_argument("dataset '" + name + "': class_count must be >= 2");
    if (labels.size() != features.rows)
      throw std::invalid_argument("dataset '" + name + "': label/row count mismatch");
    if (size() < static_cast<std::size_t>(class_count))
      throw std::invalid_argument("dataset '" + name + "': fewer samples than classes");
    for (int y : labels)
      if (y < 0 || y >= class_count)
        throw std::invalid_argument("dataset '" + name + "': label out of range");
    const auto counts = class_histogram();
    for (std::size_t c = 0; c < counts.size(); ++c)
      if (counts[c] == 0)
        throw std::invalid_argument("dataset '" + name + "': class " +
                                    std::to_string(c) + " has no samples");
    for (double v : features.values)
      if (!std::isfinite(v))
        throw std::invalid_argument("dataset '" + name + "': non-finite feature value");
  }

  // Row subset in the given index order. Does not revalidate: callers may
  // build intentionally partial views (empty test halves, CV folds).
  Dataset select(const std::vector<std::size_t>& idx, std::string new_name) const {
    Dataset out;
    out.name = std::move(new_name);
    out.class_count = class_count;
    out.label_names = label_names;
    out.features = Matrix(idx.size(), dim());
    out.labels.reserve(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const auto src = features.row(idx[i]);
      std::copy(src.begin(), src.end(), out.features.values.begin() +
                                            static_cast<std::ptrdiff_t>(i * dim()));
      out.labels.push_back(labels[idx[i]]);
    }
    return out;
  }

  // Per-class sample indices, ascending within each class.
  std::vector<std::vector<std::size_t>> indices_by_class() const {
    std::vector<std::vector<std::size_t>> by_class(
        static_cast<std::size_t>(class_count));
    for (std::size_t i = 0; i < labels.size(); ++i)
      by_class[static_cast<std::size_t>(labels[i])].push_back(i);
    return by_class;
  }
};

struct SplitSpec {
  double test_fraction = 0.5;
  bool stratified = true;
  std::uint64_t seed = 0;
};

namespace detail {

// Largest-remainder apportionment of n_target across classes, proportional
// to class counts, with every class guaranteed at least one slot.
inline std::vector<std::size_t> stratified_quotas(
    const std::vector<std::size_t>& class_counts, std::size_t n_target) {
  const std::size_t n =
      std::accumulate(class_counts.begin(), class_counts.end(), std::size_t{0});
  const std::size_t k = class_counts.size();
  std::vector<std::size_t> quota(k, 0);
  std::vector<std::pair<std::size_t, std::size_t>> remainder;  // (value, class)
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t ideal = n_target * class_counts[c];
    quota[c] = ideal / n;
    assigned += quota[c];
    remainder.emplace_back(ideal % n, c);
  }
  std::sort(remainder.begin(), remainder.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  for (std::size_t i = 0; assigned < n_target; ++i, ++assigned)
    quota[remainder[i % k].second]++;
  // No class may come out empty (the result must stay a valid dataset).
  for (std::size_t c = 0; c < k; ++c) {
    while (quota[c] == 0) {
      const std::size_t donor = static_cast<std::size_t>(std::distance(
          quota.begin(), std::max_element(quota.begin(), quota.end())));
      if (quota[donor] < 2)
        throw std::invalid_argument("subsample target too small to cover every class");
      quota[donor]--;
      quota[c]++;
    }
  }
  return quota;
}

}  // namespace detail

// Splits into (train, test). The parts are disjoint, their union is the
// input, and row order within each part follows the input. A stratified
// split keeps per-class proportions within one sample. test_fraction == 0
// returns the input unchanged plus an empty test part.
inline std::pair<Dataset, Dataset> split(const Dataset& data, const SplitSpec& spec) {
  if (!(spec.test_fraction >= 0.0 && spec.test_fraction < 1.0))
    throw std::invalid_argument("split: test_fraction must be in [0, 1)");

  std::vector<std::size_t> test_idx;
  if (spec.test_fraction > 0.0) {
    if (spec.stratified) {
      auto by_class = data.indices_by_class();
      for (std::size_t c = 0; c < by_class.size(); ++c) {
        auto& members = by_class[c];
        const auto want = static_cast<std::size_t>(
            std::llround(spec.test_fraction * static_cast<double>(members.size())));
        if (want >= members.size())
          throw std::invalid_argument(
              "split: stratification infeasible, class " + std::to_string(c) +
              " would lose all training samples");
        Rng rng(derive_seed(spec.seed, {c}));
        sample_prefix(members, want, rng);
        test_idx.insert(test_idx.end(), members.begin(),
                        members.begin() + static_cast<std::ptrdiff_t>(want));
      }
    } else {
      std::vector<std::size_t> all(data.size());
      std::iota(all.begin(), all.end(), 0);
      Rng rng(spec.seed);
      const auto want = static_cast<std::size_t>(
          std::llround(spec.test_fraction * static_cast<double>(data.size())));
      if (want >= data.size())
        throw std::invalid_argument("split: test fraction leaves no training samples");
      sample_prefix(all, want, rng);
      test_idx.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(want));
    }
  }
  std::sort(test_idx.begin(), test_idx.end());

  std::vector<std::size_t> train_idx;
  train_idx.reserve(data.size() - test_idx.size());
  std::size_t next_test = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (next_test < test_idx.size() && test_idx[next_test] == i)
      next_test++;
    else
      train_idx.push_back(i);
  }
  return {data.select(train_idx, data.name + "/train"),
          data.select(test_idx, data.name + "/test")};
}

// Stratified subsample of n_target rows, per-class proportions preserved
// within one sample. For a fixed seed, selections at increasing n_target
// are nested (each class draws a prefix of one seeded permutation).
inline Dataset subsample(const Dataset& data, std::size_t n_target, std::uint64_t seed) {
  if (n_target < static_cast<std::size_t>(data.class_count) || n_target > data.size())
    throw std::invalid_argument("subsample: n_target must be in [class_count, n]");

  auto by_class = data.indices_by_class();
  std::vector<std::size_t> counts;
  counts.reserve(by_class.size());
  for (const auto& members : by_class) counts.push_back(members.size());
  const auto quota = detail::stratified_quotas(counts, n_target);

  std::vector<std::size_t> chosen;
  chosen.reserve(n_target);
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& members = by_class[c];
    Rng rng(derive_seed(seed, {c}));
    sample_prefix(members, quota[c], rng);
    chosen.insert(chosen.end(), members.begin(),
                  members.begin() + static_cast<std::ptrdiff_t>(quota[c]));
  }
  std::sort(chosen.begin(), chosen.end());
  return data.select(chosen, data.name + "@" + std::to_string(n_target));
}

}  // namespace pv
