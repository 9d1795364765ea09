// Gaussian naive Bayes with per-class diagonal covariance.

#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "pv/dataset.hpp"
#include "pv/learner.hpp"

namespace pv {

class GaussianNbModel : public Model {
 public:
  explicit GaussianNbModel(const Dataset& data)
      : k_(data.class_count), dim_(data.dim()) {
    const std::size_t k = static_cast<std::size_t>(k_);
    std::vector<std::size_t> counts(k, 0);
    mean_.assign(k * dim_, 0.0);
    var_.assign(k * dim_, 0.0);
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto c = static_cast<std::size_t>(data.labels[i]);
      counts[c]++;
      for (std::size_t f = 0; f < dim_; ++f)
        mean_[c * dim_ + f] += data.features.at(i, f);
    }
    for (std::size_t c = 0; c < k; ++c)
      if (counts[c] > 0)
        for (std::size_t f = 0; f < dim_; ++f)
          mean_[c * dim_ + f] /= static_cast<double>(counts[c]);
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto c = static_cast<std::size_t>(data.labels[i]);
      for (std::size_t f = 0; f < dim_; ++f) {
        const double d = data.features.at(i, f) - mean_[c * dim_ + f];
        var_[c * dim_ + f] += d * d;
      }
    }
    log_prior_.assign(k, -std::numeric_limits<double>::infinity());
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;  // class absent from a CV fold: never predicted
      for (std::size_t f = 0; f < dim_; ++f) {
        var_[c * dim_ + f] /= static_cast<double>(counts[c]);
        // Floor survives constant features.
        if (var_[c * dim_ + f] < kVarianceFloor) var_[c * dim_ + f] = kVarianceFloor;
      }
      log_prior_[c] = std::log(static_cast<double>(counts[c]) /
                               static_cast<double>(data.size()));
    }
  }

  int predict_one(std::span<const double> x) const override {
    int best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < k_; ++c) {
      const auto cc = static_cast<std::size_t>(c);
      double score = log_prior_[cc];
      if (score == -std::numeric_limits<double>::infinity()) continue;
      for (std::size_t f = 0; f < dim_; ++f) {
        const double v = var_[cc * dim_ + f];
        const double d = x[f] - mean_[cc * dim_ + f];
        score -= 0.5 * (std::log(2.0 * std::numbers::pi * v) + d * d / v);
      }
      if (score > best_score) {
        best_score = score;
        best = c;
      }
    }
    return best;
  }

 private:
  static constexpr double kVarianceFloor = 1e-9;

  int k_;
  std::size_t dim_;
  std::vector<double> mean_, var_, log_prior_;
};

}  // namespace pv
