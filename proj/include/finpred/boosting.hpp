#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "finpred/forest.hpp"
#include "finpred/frame.hpp"
#include "finpred/tree.hpp"

namespace finpred {

struct GbConfig {
    int n_estimators = 130;
    double learning_rate = 0.001;
    double subsample = 0.4;  // per-stage fraction, drawn without replacement
    int max_depth = 3;
    std::size_t min_samples_leaf = 8;
    std::size_t min_samples_split = 12;
    bool max_features_sqrt = true;
    std::uint64_t seed = 0;

    void validate() const {
        if (n_estimators < 0) throw ConfigError("gb: n_estimators must be >= 0");
        if (!(learning_rate > 0)) throw ConfigError("gb: learning_rate must be > 0");
        if (!(subsample > 0 && subsample <= 1)) throw ConfigError("gb: subsample in (0,1]");
        if (max_depth < 1) throw ConfigError("gb: max_depth must be >= 1");
        if (min_samples_leaf < 1 || min_samples_split < 1)
            throw ConfigError("gb: min_samples_* must be >= 1");
    }
};

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Stagewise additive boosting on logistic loss. Each stage fits a shallow
/// regression tree to the negative gradients on a seeded subsample; leaf
/// values are Newton steps computed from the in-sample rows.
class GradientBoostingModel {
  public:
    GbConfig config;
    std::vector<std::string> feature_names;
    std::vector<DecisionTree> stages;
    double f0 = 0.0;

    void fit(const FeatureFrame& frame) {
        config.validate();
        detail::check_trainable(frame, config.min_samples_split);
        feature_names = frame.columns;
        stages.clear();
        const std::size_t n = frame.n_rows();

        double base_rate = 0;
        for (auto t : frame.target) base_rate += t;
        base_rate /= static_cast<double>(n);
        f0 = std::log(base_rate / (1.0 - base_rate));

        TreeParams params;
        params.max_depth = config.max_depth;
        params.min_samples_leaf = config.min_samples_leaf;
        params.min_samples_split = config.min_samples_split;
        params.regression = true;
        params.max_features = config.max_features_sqrt
                                  ? static_cast<std::size_t>(std::ceil(
                                        std::sqrt(static_cast<double>(frame.n_cols()))))
                                  : 0;

        std::vector<double> f(n, f0);
        const std::vector<double> weights(n, 1.0);
        for (int s = 0; s < config.n_estimators; ++s) {
            Rng rng(config.seed + static_cast<std::uint64_t>(s));  // per-stage derived seed
            const std::size_t m = std::max<std::size_t>(
                1, static_cast<std::size_t>(std::floor(config.subsample * static_cast<double>(n))));
            std::vector<std::size_t> sub = rng.sample_without_replacement(n, m);

            std::vector<double> residual(n, 0.0);
            for (std::size_t i : sub) residual[i] = frame.target[i] - logistic(f[i]);

            DecisionTree tree;
            tree.fit(frame.data, residual, weights, sub, params, rng);

            // Newton leaf update over the in-sample rows.
            std::vector<double> num(tree.nodes().size(), 0.0);
            std::vector<double> den(tree.nodes().size(), 0.0);
            for (std::size_t i : sub) {
                const int leaf = tree.leaf_index_of(frame.data, i);
                const double p = logistic(f[i]);
                num[leaf] += frame.target[i] - p;
                den[leaf] += p * (1.0 - p);
            }
            for (std::size_t node = 0; node < tree.nodes().size(); ++node) {
                if (!tree.nodes()[node].is_leaf()) continue;
                tree.set_leaf_value(static_cast<int>(node),
                                    num[node] / std::max(den[node], 1e-12));
            }
            for (std::size_t i = 0; i < n; ++i)
                f[i] += config.learning_rate * tree.predict_row(frame.data[i]);
            stages.push_back(std::move(tree));
        }
    }

    std::vector<double> predict_proba(const FeatureFrame& frame) const {
        return predict_proba_at(frame, stages.size());
    }

    /// Prediction truncated to the first `n_stages` stages.
    std::vector<double> predict_proba_at(const FeatureFrame& frame, std::size_t n_stages) const {
        if (feature_names.empty()) throw DataError("gradient boosting model is not fitted");
        n_stages = std::min(n_stages, stages.size());
        const auto mapping = detail::feature_mapping(feature_names, frame);
        std::vector<double> out(frame.n_rows());
        for (std::size_t r = 0; r < frame.n_rows(); ++r) {
            const auto row = detail::gather_row(frame.data[r], mapping);
            double score = f0;
            for (std::size_t s = 0; s < n_stages; ++s)
                score += config.learning_rate * stages[s].predict_row(row);
            out[r] = logistic(score);
        }
        return out;
    }

    std::vector<std::pair<std::string, double>> feature_importance() const {
        if (feature_names.empty()) throw DataError("gradient boosting model is not fitted");
        std::vector<double> mean_importance(feature_names.size(), 0.0);
        std::size_t counted = 0;
        for (const auto& tree : stages) {
            std::vector<double> acc(feature_names.size(), 0.0);
            tree.add_importance(acc);
            double total = 0;
            for (double v : acc) total += v;
            if (total <= 0) continue;
            ++counted;
            for (std::size_t f = 0; f < acc.size(); ++f) mean_importance[f] += acc[f] / total;
        }
        if (counted > 0)
            for (double& v : mean_importance) v /= static_cast<double>(counted);
        return detail::rank_importance(feature_names, mean_importance);
    }
};

}  // namespace finpred
