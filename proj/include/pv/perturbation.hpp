// Label perturbation: build S_r from S by flipping a round(r * n_c) subset
// of each class's labels to uniformly chosen other classes. Flipping per
// class keeps the label distribution close to the original; features are
// never touched.

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "pv/dataset.hpp"
#include "pv/random.hpp"

namespace pv {

struct PerturbationPlan {
  double noise_degree = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> flip_indices;  // sorted, unique
  std::vector<int> replacement_labels;    // parallel to flip_indices
  std::map<int, std::size_t> per_class_flip_counts;
  // Recorded for mismatch checks in apply().
  std::size_t dataset_size = 0;
  int class_count = 0;
};

// Builds a deterministic flip plan. Per class c the plan flips exactly
// round(r * n_c) labels (round half up); each replacement is uniform over
// the other k-1 classes.
inline PerturbationPlan plan(const Dataset& data, double r, std::uint64_t seed) {
  if (!(r >= 0.0 && r < 1.0))
    throw std::invalid_argument("perturbation: noise degree must be in [0, 1)");

  PerturbationPlan out;
  out.noise_degree = r;
  out.seed = seed;
  out.dataset_size = data.size();
  out.class_count = data.class_count;

  Rng rng(seed);
  auto by_class = data.indices_by_class();
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& members = by_class[c];
    const auto flips = static_cast<std::size_t>(
        std::llround(r * static_cast<double>(members.size())));
    if (flips >= members.size() && flips > 0)
      throw std::invalid_argument("perturbation: r = " + std::to_string(r) +
                                  " would flip an entire class");
    out.per_class_flip_counts[static_cast<int>(c)] = flips;
    sample_prefix(members, flips, rng);
    std::sort(members.begin(), members.begin() + static_cast<std::ptrdiff_t>(flips));
    for (std::size_t i = 0; i < flips; ++i) {
      // Uniform over the k-1 labels other than c.
      auto repl = static_cast<int>(
          rng.next_below(static_cast<std::uint64_t>(data.class_count - 1)));
      if (repl >= static_cast<int>(c)) repl++;
      out.flip_indices.push_back(members[i]);
      out.replacement_labels.push_back(repl);
    }
  }

  // Classes were visited in ascending order but their members interleave.
  std::vector<std::size_t> order(out.flip_indices.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out.flip_indices[a] < out.flip_indices[b];
  });
  PerturbationPlan sorted = out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted.flip_indices[i] = out.flip_indices[order[i]];
    sorted.replacement_labels[i] = out.replacement_labels[order[i]];
  }
  return sorted;
}

// Applies a plan built for this dataset. Features are shared unchanged;
// exactly the planned label positions differ.
inline Dataset apply(const Dataset& data, const PerturbationPlan& plan) {
  if (plan.dataset_size != data.size() || plan.class_count != data.class_count)
    throw std::invalid_argument("perturbation: plan does not match dataset");
  Dataset out = data;
  for (std::size_t i = 0; i < plan.flip_indices.size(); ++i)
    out.labels[plan.flip_indices[i]] = plan.replacement_labels[i];
  return out;
}

// Audit/replay export.
inline nlohmann::json to_json(const PerturbationPlan& plan) {
  nlohmann::json flips = nlohmann::json::array();
  for (std::size_t i = 0; i < plan.flip_indices.size(); ++i)
    flips.push_back({{"index", plan.flip_indices[i]},
                     {"replacement", plan.replacement_labels[i]}});
  nlohmann::json per_class = nlohmann::json::object();
  for (const auto& [cls, count] : plan.per_class_flip_counts)
    per_class[std::to_string(cls)] = count;
  return {{"noise_degree", plan.noise_degree},
          {"seed", plan.seed},
          {"dataset_size", plan.dataset_size},
          {"class_count", plan.class_count},
          {"per_class_flip_counts", per_class},
          {"flips", flips}};
}

}  // namespace pv
