// Fixture learners used by curve and baseline tests. Neither is reachable
// through LearnerSpec; they plug into the TrainFn seam.

#pragma once

#include <memory>
#include <span>
#include <string>
#include <unordered_map>

#include "pv/dataset.hpp"
#include "pv/learner.hpp"
#include "pv/pvcore.hpp"

namespace pvtest {

inline std::string row_key(std::span<const double> row) {
  return {reinterpret_cast<const char*>(row.data()), row.size_bytes()};
}

// Answers the label recorded for a feature row in a reference dataset,
// no matter what labels it was "trained" on. Label flips never change
// features, so this is the ideal never-fooled learner: its training
// accuracy on a sample perturbed at degree r is exactly 1 - r (up to
// per-class rounding).
class LookupModel : public pv::Model {
 public:
  explicit LookupModel(const pv::Dataset& reference) {
    for (std::size_t i = 0; i < reference.size(); ++i)
      table_[row_key(reference.features.row(i))] = reference.labels[i];
  }

  int predict_one(std::span<const double> x) const override {
    const auto it = table_.find(row_key(x));
    return it == table_.end() ? 0 : it->second;
  }

 private:
  std::unordered_map<std::string, int> table_;
};

inline pv::TrainFn oracle_trainer(const pv::Dataset& reference) {
  auto impl = std::make_shared<LookupModel>(reference);
  const int k = reference.class_count;
  const std::size_t dim = reference.dim();
  return [impl, k, dim](const pv::Dataset&) {
    pv::TrainedModel model;
    model.class_count = k;
    model.dim = dim;
    model.impl = impl;
    return model;
  };
}

class ConstantModel : public pv::Model {
 public:
  explicit ConstantModel(int label) : label_(label) {}
  int predict_one(std::span<const double>) const override { return label_; }

 private:
  int label_;
};

// Predicts the majority class of whatever labels it is trained on (ties to
// the lowest class id). On balanced binary data its accuracy is pinned at
// one half for every noise degree.
inline pv::TrainFn majority_trainer() {
  return [](const pv::Dataset& data) {
    const auto counts = data.class_histogram();
    std::size_t best = 0;
    int label = 0;
    for (std::size_t c = 0; c < counts.size(); ++c)
      if (counts[c] > best) {
        best = counts[c];
        label = static_cast<int>(c);
      }
    pv::TrainedModel model;
    model.class_count = data.class_count;
    model.dim = data.dim();
    model.impl = std::make_shared<ConstantModel>(label);
    return model;
  };
}

}  // namespace pvtest
