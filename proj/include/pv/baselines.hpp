// Out-of-sample baselines plotted next to the perturbation score:
// stratified k-fold cross-validation accuracy and hold-out test accuracy.

#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "pv/dataset.hpp"
#include "pv/learner.hpp"
#include "pv/pvcore.hpp"
#include "pv/random.hpp"

namespace pv {

struct CvSpec {
  int folds = 3;
  bool stratified = true;
  std::uint64_t seed = 0;
};

struct CvResult {
  std::vector<double> fold_accuracies;
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation across folds
};

namespace detail {

// Fold assignment per sample. Stratified: shuffle within each class, deal
// round-robin, so per-fold class proportions stay within one sample of the
// global ones.
inline std::vector<int> fold_assignment(const Dataset& data, const CvSpec& spec) {
  if (spec.folds < 2) throw std::invalid_argument("cv: folds must be >= 2");
  if (static_cast<std::size_t>(spec.folds) > data.size())
    throw std::invalid_argument("cv: more folds than samples");
  std::vector<int> fold_of(data.size(), 0);
  if (spec.stratified) {
    auto by_class = data.indices_by_class();
    for (std::size_t c = 0; c < by_class.size(); ++c) {
      auto& members = by_class[c];
      if (members.size() < static_cast<std::size_t>(spec.folds))
        throw std::invalid_argument("cv: stratification infeasible, class " +
                                    std::to_string(c) + " has fewer members than folds");
      Rng rng(derive_seed(spec.seed, {c}));
      shuffle(members, rng);
      for (std::size_t i = 0; i < members.size(); ++i)
        fold_of[members[i]] = static_cast<int>(i % static_cast<std::size_t>(spec.folds));
    }
  } else {
    std::vector<std::size_t> all(data.size());
    std::iota(all.begin(), all.end(), 0);
    Rng rng(spec.seed);
    shuffle(all, rng);
    for (std::size_t i = 0; i < all.size(); ++i)
      fold_of[all[i]] = static_cast<int>(i % static_cast<std::size_t>(spec.folds));
  }
  return fold_of;
}

}  // namespace detail

// The test folds partition the data; each fold's model sees only the other
// k-1 folds. Deterministic per seed.
inline CvResult cross_validate(const TrainFn& train_fn, const Dataset& data,
                               const CvSpec& spec) {
  const auto fold_of = detail::fold_assignment(data, spec);
  CvResult result;
  for (int fold = 0; fold < spec.folds; ++fold) {
    std::vector<std::size_t> train_idx, test_idx;
    for (std::size_t i = 0; i < data.size(); ++i)
      (fold_of[i] == fold ? test_idx : train_idx).push_back(i);
    const Dataset train_part =
        data.select(train_idx, data.name + "/cv-train" + std::to_string(fold));
    const Dataset test_part =
        data.select(test_idx, data.name + "/cv-test" + std::to_string(fold));
    const TrainedModel model = train_fn(train_part);
    result.fold_accuracies.push_back(
        accuracy(model, test_part.features, test_part.labels));
  }
  const double k = static_cast<double>(spec.folds);
  result.mean = std::accumulate(result.fold_accuracies.begin(),
                                result.fold_accuracies.end(), 0.0) /
                k;
  double ss = 0.0;
  for (double a : result.fold_accuracies) ss += (a - result.mean) * (a - result.mean);
  result.stddev = std::sqrt(ss / k);
  return result;
}

inline CvResult cross_validate(const LearnerSpec& spec, const Dataset& data,
                               const CvSpec& cv) {
  spec.ensure_valid();
  return cross_validate(trainer(spec), data, cv);
}

// Accuracy of a train-fitted model on a disjoint test set. Disjointness is
// the caller's responsibility.
inline double holdout_accuracy(const TrainFn& train_fn, const Dataset& train,
                               const Dataset& test) {
  const TrainedModel model = train_fn(train);
  return accuracy(model, test.features, test.labels);
}

inline double holdout_accuracy(const LearnerSpec& spec, const Dataset& train,
                               const Dataset& test) {
  spec.ensure_valid();
  return holdout_accuracy(trainer(spec), train, test);
}

inline nlohmann::json to_json(const CvResult& result) {
  return {{"fold_accuracies", result.fold_accuracies},
          {"mean", result.mean},
          {"std", result.stddev}};
}

}  // namespace pv
