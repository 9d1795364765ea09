// CART-style decision tree: axis-aligned splits, Gini impurity, fully
// deterministic tie-breaking.

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "pv/dataset.hpp"
#include "pv/learner.hpp"

namespace pv {

class DecisionTreeModel : public Model {
 public:
  DecisionTreeModel(const Dataset& data, int max_depth) {
    if (max_depth < 1) throw std::invalid_argument("decision_tree: max_depth must be >= 1");
    data_ = &data;
    std::vector<std::size_t> idx(data.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    build(std::move(idx), max_depth);
    data_ = nullptr;
  }

  int predict_one(std::span<const double> x) const override {
    int node = 0;
    while (nodes_[static_cast<std::size_t>(node)].label < 0) {
      const Node& nd = nodes_[static_cast<std::size_t>(node)];
      node = x[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
    }
    return nodes_[static_cast<std::size_t>(node)].label;
  }

 private:
  struct Node {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int label = -1;  // >= 0 marks a leaf
  };

  struct Pending {
    std::vector<std::size_t> idx;
    int node;
    int depth;
  };

  std::vector<std::size_t> count_classes(const std::vector<std::size_t>& idx) const {
    std::vector<std::size_t> counts(static_cast<std::size_t>(data_->class_count), 0);
    for (std::size_t i : idx) counts[static_cast<std::size_t>(data_->labels[i])]++;
    return counts;
  }

  static double gini(const std::vector<std::size_t>& counts, std::size_t total) {
    double sum_sq = 0.0;
    for (std::size_t c : counts) {
      const double p = static_cast<double>(c) / static_cast<double>(total);
      sum_sq += p * p;
    }
    return 1.0 - sum_sq;
  }

  // Majority class, ties to the lowest class id.
  static int majority(const std::vector<std::size_t>& counts) {
    std::size_t best = 0;
    int label = 0;
    for (std::size_t c = 0; c < counts.size(); ++c)
      if (counts[c] > best) {
        best = counts[c];
        label = static_cast<int>(c);
      }
    return label;
  }

  void build(std::vector<std::size_t> root_idx, int max_depth) {
    nodes_.emplace_back();
    std::vector<Pending> stack;
    stack.push_back({std::move(root_idx), 0, 0});

    while (!stack.empty()) {
      Pending item = std::move(stack.back());
      stack.pop_back();
      const auto counts = count_classes(item.idx);
      const std::size_t n = item.idx.size();
      Node& node = nodes_[static_cast<std::size_t>(item.node)];

      const bool pure =
          *std::max_element(counts.begin(), counts.end()) == n;
      if (pure || item.depth >= max_depth) {
        node.label = majority(counts);
        continue;
      }

      // Best split: lowest weighted child impurity; ties go to the lowest
      // feature index, then the lowest threshold (the scan visits
      // candidates in exactly that order and only accepts strict wins).
      int best_feature = -1;
      double best_threshold = 0.0;
      double best_impurity = std::numeric_limits<double>::infinity();
      std::vector<std::pair<double, std::size_t>> order(n);
      std::vector<std::size_t> left_counts(counts.size());
      for (std::size_t f = 0; f < data_->dim(); ++f) {
        for (std::size_t i = 0; i < n; ++i)
          order[i] = {data_->features.at(item.idx[i], f), item.idx[i]};
        std::sort(order.begin(), order.end());
        std::fill(left_counts.begin(), left_counts.end(), 0);
        for (std::size_t i = 0; i + 1 < n; ++i) {
          left_counts[static_cast<std::size_t>(data_->labels[order[i].second])]++;
          if (order[i].first == order[i + 1].first) continue;
          double threshold = 0.5 * (order[i].first + order[i + 1].first);
          // Midpoints can round onto the upper value when neighbours are
          // adjacent doubles; fall back to the lower value so the "x <=
          // threshold" rule still separates them.
          if (threshold >= order[i + 1].first) threshold = order[i].first;
          const std::size_t nl = i + 1;
          const std::size_t nr = n - nl;
          double gl = 0.0, gr = 0.0;
          for (std::size_t c = 0; c < counts.size(); ++c) {
            const double pl =
                static_cast<double>(left_counts[c]) / static_cast<double>(nl);
            const double pr = static_cast<double>(counts[c] - left_counts[c]) /
                              static_cast<double>(nr);
            gl += pl * pl;
            gr += pr * pr;
          }
          const double weighted =
              (static_cast<double>(nl) * (1.0 - gl) +
               static_cast<double>(nr) * (1.0 - gr)) /
              static_cast<double>(n);
          if (weighted < best_impurity) {
            best_impurity = weighted;
            best_feature = static_cast<int>(f);
            best_threshold = threshold;
          }
        }
      }

      if (best_feature < 0) {
        // Every feature is constant within the node.
        node.label = majority(counts);
        continue;
      }

      std::vector<std::size_t> left_idx, right_idx;
      for (std::size_t i : item.idx) {
        if (data_->features.at(i, static_cast<std::size_t>(best_feature)) <=
            best_threshold)
          left_idx.push_back(i);
        else
          right_idx.push_back(i);
      }

      node.feature = best_feature;
      node.threshold = best_threshold;
      node.left = static_cast<int>(nodes_.size());
      node.right = static_cast<int>(nodes_.size() + 1);
      const int left_node = node.left;
      const int right_node = node.right;
      nodes_.emplace_back();
      nodes_.emplace_back();
      stack.push_back({std::move(right_idx), right_node, item.depth + 1});
      stack.push_back({std::move(left_idx), left_node, item.depth + 1});
    }
  }

  const Dataset* data_ = nullptr;
  std::vector<Node> nodes_;
};

}  // namespace pv
