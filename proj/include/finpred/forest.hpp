#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "finpred/frame.hpp"
#include "finpred/metrics.hpp"
#include "finpred/tree.hpp"

namespace finpred {

namespace detail {

/// Map frame columns onto the model's feature order; missing and extra
/// columns are both reported by name.
inline std::vector<std::size_t> feature_mapping(const std::vector<std::string>& model_features,
                                                const FeatureFrame& frame) {
    std::vector<std::size_t> mapping;
    std::string missing, extra;
    for (const auto& name : model_features) {
        const int c = frame.find_column(name);
        if (c < 0)
            missing += missing.empty() ? name : ", " + name;
        else
            mapping.push_back(static_cast<std::size_t>(c));
    }
    for (const auto& name : frame.columns) {
        bool known = false;
        for (const auto& f : model_features) known = known || (f == name);
        if (!known) extra += extra.empty() ? name : ", " + name;
    }
    if (!missing.empty() || !extra.empty()) {
        std::string msg = "feature mismatch";
        if (!missing.empty()) msg += "; missing: [" + missing + "]";
        if (!extra.empty()) msg += "; extra: [" + extra + "]";
        throw DataError(msg);
    }
    return mapping;
}

inline std::vector<double> gather_row(const std::vector<double>& row,
                                      const std::vector<std::size_t>& mapping) {
    std::vector<double> out;
    out.reserve(mapping.size());
    for (std::size_t c : mapping) out.push_back(row[c]);
    return out;
}

inline void check_trainable(const FeatureFrame& frame, std::size_t min_rows) {
    if (!frame.labeled()) throw DataError("frame is unlabeled");
    if (frame.n_rows() < min_rows)
        throw DataError("frame has " + std::to_string(frame.n_rows()) +
                        " rows; need at least " + std::to_string(min_rows));
    bool pos = false, neg = false;
    for (auto t : frame.target) {
        if (t < 0) throw DataError("frame contains undefined targets; filter them first");
        (t > 0 ? pos : neg) = true;
    }
    if (!pos || !neg) throw DataError("single-class target; cannot train a classifier");
}

/// Descending importance, ties broken by feature name; normalized to sum 1.
inline std::vector<std::pair<std::string, double>> rank_importance(
    const std::vector<std::string>& names, const std::vector<double>& raw) {
    double total = 0;
    for (double v : raw) total += v;
    std::vector<std::pair<std::string, double>> ranked;
    for (std::size_t i = 0; i < names.size(); ++i)
        ranked.emplace_back(names[i], total > 0 ? raw[i] / total : 0.0);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return ranked;
}

}  // namespace detail

/// Random Forest hyperparameters (defaults follow the reference fundamental
/// model configuration).
struct RfConfig {
    int n_estimators = 170;
    int max_depth = 5;
    double max_samples = 0.4;  // bootstrap fraction
    std::size_t min_samples_leaf = 13;
    std::size_t min_samples_split = 20;
    bool max_features_sqrt = true;
    bool balanced_subsample = true;
    bool bootstrap = true;
    std::uint64_t seed = 0;

    void validate() const {
        if (n_estimators < 1) throw ConfigError("rf: n_estimators must be >= 1");
        if (max_depth < 1) throw ConfigError("rf: max_depth must be >= 1");
        if (!(max_samples > 0 && max_samples <= 1)) throw ConfigError("rf: max_samples in (0,1]");
        if (min_samples_leaf < 1 || min_samples_split < 1)
            throw ConfigError("rf: min_samples_* must be >= 1");
    }
};

class RandomForestModel {
  public:
    RfConfig config;
    std::vector<std::string> feature_names;
    std::vector<DecisionTree> trees;

    void fit(const FeatureFrame& frame) {
        config.validate();
        detail::check_trainable(frame, config.min_samples_split);
        feature_names = frame.columns;
        trees.clear();
        const std::size_t n = frame.n_rows();
        const std::size_t n_features = frame.n_cols();
        TreeParams params;
        params.max_depth = config.max_depth;
        params.min_samples_leaf = config.min_samples_leaf;
        params.min_samples_split = config.min_samples_split;
        params.max_features = config.max_features_sqrt
                                  ? static_cast<std::size_t>(
                                        std::ceil(std::sqrt(static_cast<double>(n_features))))
                                  : 0;
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = frame.target[i];

        for (int t = 0; t < config.n_estimators; ++t) {
            Rng rng(config.seed + static_cast<std::uint64_t>(t));  // per-tree derived seed
            std::vector<std::size_t> indices;
            if (config.bootstrap) {
                const std::size_t m = std::max<std::size_t>(
                    1, static_cast<std::size_t>(std::floor(config.max_samples *
                                                           static_cast<double>(n))));
                indices.reserve(m);
                for (std::size_t i = 0; i < m; ++i)
                    indices.push_back(static_cast<std::size_t>(
                        rng.uniform_int(0, static_cast<std::int64_t>(n) - 1)));
            } else {
                indices.resize(n);
                std::iota(indices.begin(), indices.end(), std::size_t{0});
            }
            // balanced_subsample: classes reweighted per tree so each class
            // contributes half of this tree's total weight.
            std::vector<double> w(n, 1.0);
            if (config.balanced_subsample) {
                double n1 = 0;
                for (std::size_t i : indices) n1 += y[i];
                const double m = static_cast<double>(indices.size());
                const double w1 = n1 > 0 ? m / (2.0 * n1) : 0.0;
                const double w0 = (m - n1) > 0 ? m / (2.0 * (m - n1)) : 0.0;
                for (std::size_t i = 0; i < n; ++i) w[i] = frame.target[i] > 0 ? w1 : w0;
            }
            DecisionTree tree;
            tree.fit(frame.data, y, w, std::move(indices), params, rng);
            trees.push_back(std::move(tree));
        }
    }

    /// Mean of per-tree class-1 probabilities.
    std::vector<double> predict_proba(const FeatureFrame& frame) const {
        if (trees.empty()) throw DataError("random forest is not fitted");
        const auto mapping = detail::feature_mapping(feature_names, frame);
        std::vector<double> out(frame.n_rows(), 0.0);
        for (std::size_t r = 0; r < frame.n_rows(); ++r) {
            const auto row = detail::gather_row(frame.data[r], mapping);
            double sum = 0;
            for (const auto& tree : trees) sum += tree.predict_row(row);
            out[r] = sum / static_cast<double>(trees.size());
        }
        return out;
    }

    std::vector<std::pair<std::string, double>> feature_importance() const {
        if (trees.empty()) throw DataError("random forest is not fitted");
        std::vector<double> mean_importance(feature_names.size(), 0.0);
        std::size_t counted = 0;
        for (const auto& tree : trees) {
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
