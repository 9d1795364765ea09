// One-vs-rest linear classifiers trained by deterministic epoch-ordered
// subgradient descent (samples visited in index order, no sampling).
//
// hinge:    pegasos objective  lambda/2 |w|^2 + mean hinge,  step 1/(lambda t)
// logistic: same scheme on the logistic loss; with l2 == 0 the step decays
//           as 1/sqrt(t) instead (1/(lambda t) is undefined).
//
// The bias is carried as an augmented always-one feature, so it is weakly
// regularised along with the weights.

#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "pv/dataset.hpp"
#include "pv/learner.hpp"

namespace pv {

class LinearSgdModel : public Model {
 public:
  enum class Loss { hinge, logistic };

  LinearSgdModel(const Dataset& data, Loss loss, double lambda, int epochs)
      : dim_(data.dim()), k_(data.class_count) {
    if (epochs < 1) throw std::invalid_argument("linear model: epochs must be >= 1");
    if (!(lambda >= 0)) throw std::invalid_argument("linear model: negative regulariser");
    const std::size_t n = data.size();
    const std::size_t d = dim_ + 1;  // widened with the bias slot
    weights_.assign(static_cast<std::size_t>(k_) * d, 0.0);

    std::vector<double> w(d, 0.0);
    for (int cls = 0; cls < k_; ++cls) {
      std::fill(w.begin(), w.end(), 0.0);
      std::uint64_t t = 0;
      for (int epoch = 0; epoch < epochs; ++epoch) {
        for (std::size_t i = 0; i < n; ++i) {
          ++t;
          const double eta = lambda > 0
                                 ? 1.0 / (lambda * static_cast<double>(t))
                                 : 1.0 / std::sqrt(static_cast<double>(t));
          const double y = data.labels[i] == cls ? 1.0 : -1.0;
          const auto x = data.features.row(i);
          double score = w[dim_];
          for (std::size_t f = 0; f < dim_; ++f) score += w[f] * x[f];

          const double shrink = 1.0 - eta * lambda;
          for (double& v : w) v *= shrink;
          if (loss == Loss::hinge) {
            if (y * score < 1.0) {
              for (std::size_t f = 0; f < dim_; ++f) w[f] += eta * y * x[f];
              w[dim_] += eta * y;
            }
          } else {
            const double margin = y * score;
            // sigma(-margin), guarded against exp overflow
            const double g = margin > 35.0   ? std::exp(-margin)
                             : margin < -35.0 ? 1.0
                                              : 1.0 / (1.0 + std::exp(margin));
            for (std::size_t f = 0; f < dim_; ++f) w[f] += eta * g * y * x[f];
            w[dim_] += eta * g * y;
          }
        }
      }
      std::copy(w.begin(), w.end(),
                weights_.begin() + static_cast<std::ptrdiff_t>(cls) *
                                       static_cast<std::ptrdiff_t>(d));
    }
  }

  // Pegasos regularisation strength for an SVM parameterised by C.
  static double lambda_from_c(double c, std::size_t n_samples) {
    return 1.0 / (c * static_cast<double>(n_samples));
  }

  int predict_one(std::span<const double> x) const override {
    const std::size_t d = dim_ + 1;
    int best = 0;
    double best_score = 0.0;
    for (int cls = 0; cls < k_; ++cls) {
      const double* w = weights_.data() + static_cast<std::size_t>(cls) * d;
      double score = w[dim_];
      for (std::size_t f = 0; f < dim_; ++f) score += w[f] * x[f];
      if (cls == 0 || score > best_score) {
        best_score = score;
        best = cls;
      }
    }
    return best;
  }

 private:
  std::size_t dim_;
  int k_;
  std::vector<double> weights_;  // k rows of (dim + 1), bias last
};

}  // namespace pv
