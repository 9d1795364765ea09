// Uniform train/predict interface over the classifier zoo.
//
// Every learner is a deterministic pure function of (spec, data): there is
// no hidden randomness, ties break by fixed rules, so retraining with the
// same inputs reproduces the same model bit for bit.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pv/dataset.hpp"
#include "pv/format.hpp"

namespace pv {

enum class LearnerFamily {
  decision_tree,
  gaussian_nb,
  linear_svm,
  logistic_regression,
  knn,
};

inline std::string to_string(LearnerFamily f) {
  switch (f) {
    case LearnerFamily::decision_tree: return "decision_tree";
    case LearnerFamily::gaussian_nb: return "gaussian_nb";
    case LearnerFamily::linear_svm: return "linear_svm";
    case LearnerFamily::logistic_regression: return "logistic_regression";
    case LearnerFamily::knn: return "knn";
  }
  throw std::invalid_argument("unknown learner family");
}

inline LearnerFamily learner_family_from_string(const std::string& s) {
  if (s == "decision_tree") return LearnerFamily::decision_tree;
  if (s == "gaussian_nb") return LearnerFamily::gaussian_nb;
  if (s == "linear_svm") return LearnerFamily::linear_svm;
  if (s == "logistic_regression") return LearnerFamily::logistic_regression;
  if (s == "knn") return LearnerFamily::knn;
  throw std::invalid_argument("unknown learner family '" + s + "'");
}

// One hypothesis-search configuration: family, hyperparameters, seed.
struct LearnerSpec {
  LearnerFamily family = LearnerFamily::decision_tree;
  std::map<std::string, double> hyperparams;
  std::uint64_t train_seed = 0;

  double param(const std::string& key) const {
    const auto it = hyperparams.find(key);
    if (it == hyperparams.end())
      throw std::invalid_argument(to_string(family) + ": missing hyperparameter '" +
                                  key + "'");
    return it->second;
  }

  void ensure_valid() const {
    auto require = [&](std::initializer_list<const char*> keys) {
      for (const char* k : keys) param(k);
      for (const auto& entry : hyperparams) {
        bool known = false;
        for (const char* want : keys) known = known || entry.first == want;
        if (!known)
          throw std::invalid_argument(to_string(family) +
                                      ": unknown hyperparameter '" + entry.first + "'");
      }
    };
    switch (family) {
      case LearnerFamily::decision_tree:
        require({"max_depth"});
        if (param("max_depth") < 1)
          throw std::invalid_argument("decision_tree: max_depth must be >= 1");
        break;
      case LearnerFamily::gaussian_nb:
        require({});
        break;
      case LearnerFamily::linear_svm:
        require({"C", "epochs"});
        if (!(param("C") > 0)) throw std::invalid_argument("linear_svm: C must be > 0");
        if (param("epochs") < 1)
          throw std::invalid_argument("linear_svm: epochs must be >= 1");
        break;
      case LearnerFamily::logistic_regression:
        require({"l2", "epochs"});
        if (!(param("l2") >= 0))
          throw std::invalid_argument("logistic_regression: l2 must be >= 0");
        if (param("epochs") < 1)
          throw std::invalid_argument("logistic_regression: epochs must be >= 1");
        break;
      case LearnerFamily::knn:
        require({"k"});
        if (param("k") < 1) throw std::invalid_argument("knn: k must be >= 1");
        break;
    }
  }
};

// Canonical display label, e.g. "linear_svm(C=1;epochs=200)". Separator is
// comma-free so labels stay single CSV cells.
inline std::string to_string(const LearnerSpec& spec) {
  std::string out = to_string(spec.family);
  out += "(";
  bool first = true;
  for (const auto& [k, v] : spec.hyperparams) {
    if (!first) out += ";";
    out += k + "=" + format_double(v);
    first = false;
  }
  out += ")";
  return out;
}

// Canonical defaults for each family, used when a config names a family
// without pinning every hyperparameter.
inline LearnerSpec default_spec(LearnerFamily family) {
  LearnerSpec spec;
  spec.family = family;
  switch (family) {
    case LearnerFamily::decision_tree: spec.hyperparams = {{"max_depth", 10}}; break;
    case LearnerFamily::gaussian_nb: break;
    case LearnerFamily::linear_svm: spec.hyperparams = {{"C", 1}, {"epochs", 200}}; break;
    case LearnerFamily::logistic_regression:
      spec.hyperparams = {{"l2", 0.001}, {"epochs", 200}};
      break;
    case LearnerFamily::knn: spec.hyperparams = {{"k", 3}}; break;
  }
  return spec;
}

// Family-specific trained parameters.
class Model {
 public:
  virtual ~Model() = default;
  virtual int predict_one(std::span<const double> x) const = 0;
};

struct TrainedModel {
  // Absent for ad hoc models (test fixtures) that were not produced by a
  // LearnerSpec.
  std::optional<LearnerSpec> spec;
  int class_count = 0;
  std::size_t dim = 0;
  std::shared_ptr<const Model> impl;

  int predict_one(std::span<const double> x) const {
    if (x.size() != dim)
      throw std::invalid_argument("predict: feature dimension mismatch");
    const int y = impl->predict_one(x);
    return y;
  }

  std::vector<int> predict(const Matrix& features) const {
    if (features.cols != dim)
      throw std::invalid_argument("predict: feature dimension mismatch");
    std::vector<int> out;
    out.reserve(features.rows);
    for (std::size_t r = 0; r < features.rows; ++r)
      out.push_back(impl->predict_one(features.row(r)));
    return out;
  }
};

inline double accuracy(const TrainedModel& model, const Matrix& features,
                       const std::vector<int>& labels) {
  const auto pred = model.predict(features);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    if (pred[i] == labels[i]) hits++;
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

// Fraction of the sample the model reproduces, measured against the
// sample's own labels.
inline double training_accuracy(const TrainedModel& model, const Dataset& data) {
  return accuracy(model, data.features, data.labels);
}

TrainedModel train(const LearnerSpec& spec, const Dataset& data);

}  // namespace pv

#include "pv/learners/decision_tree.hpp"
#include "pv/learners/gaussian_nb.hpp"
#include "pv/learners/knn.hpp"
#include "pv/learners/linear_sgd.hpp"

namespace pv {

inline TrainedModel train(const LearnerSpec& spec, const Dataset& data) {
  spec.ensure_valid();
  if (data.size() == 0) throw std::invalid_argument("train: empty dataset");
  {
    int distinct = 0;
    std::vector<bool> seen(static_cast<std::size_t>(data.class_count), false);
    for (int y : data.labels)
      if (!seen[static_cast<std::size_t>(y)]) {
        seen[static_cast<std::size_t>(y)] = true;
        distinct++;
      }
    if (distinct < 2)
      throw std::invalid_argument("train: degenerate single-class data");
  }

  TrainedModel model;
  model.spec = spec;
  model.class_count = data.class_count;
  model.dim = data.dim();
  switch (spec.family) {
    case LearnerFamily::decision_tree:
      model.impl = std::make_shared<DecisionTreeModel>(
          data, static_cast<int>(spec.param("max_depth")));
      break;
    case LearnerFamily::gaussian_nb:
      model.impl = std::make_shared<GaussianNbModel>(data);
      break;
    case LearnerFamily::linear_svm:
      model.impl = std::make_shared<LinearSgdModel>(
          data, LinearSgdModel::Loss::hinge,
          LinearSgdModel::lambda_from_c(spec.param("C"), data.size()),
          static_cast<int>(spec.param("epochs")));
      break;
    case LearnerFamily::logistic_regression:
      model.impl = std::make_shared<LinearSgdModel>(
          data, LinearSgdModel::Loss::logistic, spec.param("l2"),
          static_cast<int>(spec.param("epochs")));
      break;
    case LearnerFamily::knn:
      model.impl = std::make_shared<KnnModel>(data, static_cast<int>(spec.param("k")));
      break;
  }
  return model;
}

}  // namespace pv
