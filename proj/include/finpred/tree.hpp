#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "finpred/errors.hpp"
#include "finpred/rng.hpp"

namespace finpred {

/// One node of a binary split tree. `feature < 0` marks a leaf; `value` is the
/// class-1 probability (classification) or the leaf score (regression).
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
    double impurity = 0.0;
    double weighted_n = 0.0;
    std::size_t n_samples = 0;
    int depth = 0;

    bool is_leaf() const { return feature < 0; }
};

struct TreeParams {
    int max_depth = 5;
    std::size_t min_samples_leaf = 1;
    std::size_t min_samples_split = 2;
    std::size_t max_features = 0;  // 0 = consider all features
    bool regression = false;       // Gini impurity otherwise
};

/// CART-style tree. Split thresholds sit at midpoints between sorted distinct
/// feature values; impurity ties resolve to the lowest feature index, then the
/// lowest threshold (candidate features are scanned in ascending order and
/// only strictly better gains are accepted).
class DecisionTree {
  public:
    void fit(const std::vector<std::vector<double>>& X, const std::vector<double>& y,
             const std::vector<double>& w, std::vector<std::size_t> indices,
             const TreeParams& params, Rng& rng) {
        nodes_.clear();
        params_ = params;
        n_features_ = X.empty() ? 0 : X[0].size();
        build(X, y, w, indices, 0, rng);
    }

    double predict_row(const std::vector<double>& row) const {
        return nodes_[leaf_index(row)].value;
    }

    int leaf_index(const std::vector<double>& row) const {
        int node = 0;
        while (!nodes_[node].is_leaf()) {
            node = row[nodes_[node].feature] <= nodes_[node].threshold ? nodes_[node].left
                                                                       : nodes_[node].right;
        }
        return node;
    }

    /// Route a training sample (by row index into X) to its leaf.
    int leaf_index_of(const std::vector<std::vector<double>>& X, std::size_t i) const {
        return leaf_index(X[i]);
    }

    void set_leaf_value(int node, double value) { nodes_[node].value = value; }

    /// Accumulate weighted impurity decrease per feature.
    void add_importance(std::vector<double>& acc) const {
        for (const auto& node : nodes_) {
            if (node.is_leaf()) continue;
            const auto& l = nodes_[node.left];
            const auto& r = nodes_[node.right];
            acc[node.feature] += node.weighted_n * node.impurity - l.weighted_n * l.impurity -
                                 r.weighted_n * r.impurity;
        }
    }

    const std::vector<TreeNode>& nodes() const { return nodes_; }
    std::vector<TreeNode>& mutable_nodes() { return nodes_; }

  private:
    std::vector<TreeNode> nodes_;
    TreeParams params_;
    std::size_t n_features_ = 0;

    struct NodeStats {
        double weight = 0;
        double weighted_sum = 0;    // w*y
        double weighted_sq = 0;     // w*y^2 (regression)
        std::size_t count = 0;
    };

    static double impurity_of(const NodeStats& s, bool regression) {
        if (s.weight <= 0) return 0.0;
        if (regression) {
            const double mean = s.weighted_sum / s.weight;
            return std::max(0.0, s.weighted_sq / s.weight - mean * mean);
        }
        const double p1 = s.weighted_sum / s.weight;
        return 2.0 * p1 * (1.0 - p1);  // Gini for two classes
    }

    int build(const std::vector<std::vector<double>>& X, const std::vector<double>& y,
              const std::vector<double>& w, std::vector<std::size_t>& indices, int depth,
              Rng& rng) {
        NodeStats stats;
        for (std::size_t i : indices) {
            stats.weight += w[i];
            stats.weighted_sum += w[i] * y[i];
            stats.weighted_sq += w[i] * y[i] * y[i];
            ++stats.count;
        }
        const int node_id = static_cast<int>(nodes_.size());
        nodes_.push_back({});
        TreeNode node;
        node.depth = depth;
        node.n_samples = stats.count;
        node.weighted_n = stats.weight;
        node.impurity = impurity_of(stats, params_.regression);
        node.value = stats.weight > 0 ? stats.weighted_sum / stats.weight : 0.0;

        const bool can_split = depth < params_.max_depth &&
                               stats.count >= params_.min_samples_split &&
                               node.impurity > 0.0;
        if (!can_split) {
            nodes_[node_id] = node;
            return node_id;
        }

        const Split split = best_split(X, y, w, indices, stats, node.impurity, rng);
        if (split.feature < 0) {
            nodes_[node_id] = node;
            return node_id;
        }
        node.feature = split.feature;
        node.threshold = split.threshold;

        std::vector<std::size_t> left_idx, right_idx;
        left_idx.reserve(indices.size());
        right_idx.reserve(indices.size());
        for (std::size_t i : indices) {
            (X[i][split.feature] <= split.threshold ? left_idx : right_idx).push_back(i);
        }
        indices.clear();
        indices.shrink_to_fit();
        node.left = build(X, y, w, left_idx, depth + 1, rng);
        node.right = build(X, y, w, right_idx, depth + 1, rng);
        nodes_[node_id] = node;
        return node_id;
    }

    struct Split {
        int feature = -1;
        double threshold = 0.0;
        double gain = 0.0;
    };

    Split best_split(const std::vector<std::vector<double>>& X, const std::vector<double>& y,
                     const std::vector<double>& w, const std::vector<std::size_t>& indices,
                     const NodeStats& total, double node_impurity, Rng& rng) const {
        std::vector<std::size_t> features;
        if (params_.max_features == 0 || params_.max_features >= n_features_) {
            features.resize(n_features_);
            std::iota(features.begin(), features.end(), std::size_t{0});
        } else {
            features = rng.sample_without_replacement(n_features_, params_.max_features);
        }

        Split best;
        std::vector<std::pair<double, std::size_t>> sorted;
        sorted.reserve(indices.size());
        for (std::size_t f : features) {
            sorted.clear();
            for (std::size_t i : indices) sorted.emplace_back(X[i][f], i);
            std::sort(sorted.begin(), sorted.end());

            NodeStats left;
            for (std::size_t s = 1; s < sorted.size(); ++s) {
                const std::size_t i = sorted[s - 1].second;
                left.weight += w[i];
                left.weighted_sum += w[i] * y[i];
                left.weighted_sq += w[i] * y[i] * y[i];
                ++left.count;
                if (sorted[s - 1].first == sorted[s].first) continue;
                if (left.count < params_.min_samples_leaf) continue;
                if (sorted.size() - left.count < params_.min_samples_leaf) continue;
                NodeStats right;
                right.weight = total.weight - left.weight;
                right.weighted_sum = total.weighted_sum - left.weighted_sum;
                right.weighted_sq = total.weighted_sq - left.weighted_sq;
                right.count = total.count - left.count;
                const double gain = total.weight * node_impurity -
                                    left.weight * impurity_of(left, params_.regression) -
                                    right.weight * impurity_of(right, params_.regression);
                if (gain > best.gain) {
                    best.feature = static_cast<int>(f);
                    best.threshold = (sorted[s - 1].first + sorted[s].first) / 2.0;
                    best.gain = gain;
                }
            }
        }
        return best;
    }
};

}  // namespace finpred
