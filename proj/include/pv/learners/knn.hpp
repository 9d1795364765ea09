// Brute-force k-nearest-neighbours. Distance ties break toward the lower
// sample index, vote ties toward the lower class id.

#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "pv/dataset.hpp"
#include "pv/learner.hpp"

namespace pv {

class KnnModel : public Model {
 public:
  KnnModel(const Dataset& data, int k) : k_(k), dim_(data.dim()) {
    if (k < 1) throw std::invalid_argument("knn: k must be >= 1");
    points_ = data.features;
    labels_ = data.labels;
    class_count_ = data.class_count;
  }

  int predict_one(std::span<const double> x) const override {
    const std::size_t n = points_.rows;
    const std::size_t k = std::min(static_cast<std::size_t>(k_), n);
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
      double d2 = 0.0;
      const auto p = points_.row(i);
      for (std::size_t f = 0; f < dim_; ++f) {
        const double d = x[f] - p[f];
        d2 += d * d;
      }
      dist[i] = {d2, i};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k),
                      dist.end());
    std::vector<std::size_t> votes(static_cast<std::size_t>(class_count_), 0);
    for (std::size_t i = 0; i < k; ++i)
      votes[static_cast<std::size_t>(labels_[dist[i].second])]++;
    std::size_t best = 0;
    int label = 0;
    for (std::size_t c = 0; c < votes.size(); ++c)
      if (votes[c] > best) {
        best = votes[c];
        label = static_cast<int>(c);
      }
    return label;
  }

 private:
  int k_;
  std::size_t dim_;
  int class_count_ = 0;
  Matrix points_;
  std::vector<int> labels_;
};

}  // namespace pv
