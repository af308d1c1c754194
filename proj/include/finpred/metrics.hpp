#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "finpred/errors.hpp"
#include "finpred/frame.hpp"
#include "finpred/rng.hpp"

namespace finpred {

inline constexpr double metric_undefined = std::numeric_limits<double>::quiet_NaN();

struct RocCurve {
    std::vector<double> fpr;
    std::vector<double> tpr;
    std::vector<double> thresholds;  // aligned to the point after (0,0)
};

namespace detail {

inline void check_two_classes(const std::vector<std::int8_t>& labels) {
    std::size_t pos = 0, neg = 0;
    for (auto y : labels) (y > 0 ? pos : neg)++;
    if (pos == 0 || neg == 0)
        throw DataError("labels contain a single class; AUC is undefined");
}

}  // namespace detail

/// ROC over all distinct score thresholds plus the trapezoidal area. Tied
/// scores collapse into one sweep step, so the area equals the Mann-Whitney
/// statistic with ties counted 1/2.
inline std::pair<RocCurve, double> roc_auc(const std::vector<double>& scores,
                                           const std::vector<std::int8_t>& labels) {
    if (scores.size() != labels.size()) throw ConfigError("scores/labels length mismatch");
    detail::check_two_classes(labels);

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] > scores[b];
    });

    double n_pos = 0, n_neg = 0;
    for (auto y : labels) (y > 0 ? n_pos : n_neg)++;

    RocCurve curve;
    curve.fpr.push_back(0.0);
    curve.tpr.push_back(0.0);
    double tp = 0, fp = 0, auc = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double threshold = scores[order[i]];
        double tp_step = 0, fp_step = 0;
        while (i < order.size() && scores[order[i]] == threshold) {
            (labels[order[i]] > 0 ? tp_step : fp_step)++;
            ++i;
        }
        const double prev_tpr = tp / n_pos;
        tp += tp_step;
        fp += fp_step;
        const double x0 = curve.fpr.back();
        const double x1 = fp / n_neg;
        const double y1 = tp / n_pos;
        auc += (x1 - x0) * (prev_tpr + y1) / 2.0;
        curve.fpr.push_back(x1);
        curve.tpr.push_back(y1);
        curve.thresholds.push_back(threshold);
    }
    return {curve, auc};
}

inline double auc_score(const std::vector<double>& scores, const std::vector<std::int8_t>& labels) {
    return roc_auc(scores, labels).second;
}

/// Full metric panel for one (scores, labels, threshold) triple. Precision and
/// F1 are NaN when no positives are predicted.
struct EvalReport {
    double auc = metric_undefined;
    double acc = metric_undefined;
    double recall = metric_undefined;
    double specificity = metric_undefined;
    double precision = metric_undefined;
    double f1 = metric_undefined;
    double type1 = metric_undefined;  // false positive rate
    double type2 = metric_undefined;  // false negative rate
    std::size_t n_pos = 0;
    std::size_t n_neg = 0;
    double threshold = 0.5;
};

inline EvalReport confusion_report(const std::vector<double>& scores,
                                   const std::vector<std::int8_t>& labels,
                                   double threshold = 0.5) {
    if (scores.size() != labels.size()) throw ConfigError("scores/labels length mismatch");
    detail::check_two_classes(labels);
    double tp = 0, fp = 0, tn = 0, fn = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool predicted = scores[i] >= threshold;
        const bool actual = labels[i] > 0;
        if (predicted && actual) ++tp;
        else if (predicted) ++fp;
        else if (actual) ++fn;
        else ++tn;
    }
    EvalReport report;
    report.threshold = threshold;
    report.n_pos = static_cast<std::size_t>(tp + fn);
    report.n_neg = static_cast<std::size_t>(fp + tn);
    report.auc = auc_score(scores, labels);
    report.acc = (tp + tn) / (tp + fp + tn + fn);
    report.recall = tp / (tp + fn);
    report.specificity = tn / (tn + fp);
    report.type1 = fp / (fp + tn);
    report.type2 = fn / (fn + tp);
    if (tp + fp > 0) {
        report.precision = tp / (tp + fp);
        report.f1 = (report.precision + report.recall) > 0
                        ? 2.0 * report.precision * report.recall /
                              (report.precision + report.recall)
                        : 0.0;
    }
    return report;
}

/// Percentile bootstrap interval for the AUC; resampling is stratified by
/// class so every replicate keeps both classes.
inline std::pair<double, double> bootstrap_ci(const std::vector<double>& scores,
                                              const std::vector<std::int8_t>& labels,
                                              std::size_t B = 1000, double level = 0.95,
                                              std::uint64_t seed = 0) {
    detail::check_two_classes(labels);
    if (B < 2) throw ConfigError("bootstrap requires B >= 2");
    std::vector<std::size_t> pos_idx, neg_idx;
    for (std::size_t i = 0; i < labels.size(); ++i)
        (labels[i] > 0 ? pos_idx : neg_idx).push_back(i);

    Rng rng(derive_seed(seed, "bootstrap-auc"));
    std::vector<double> aucs;
    aucs.reserve(B);
    std::vector<double> s(labels.size());
    std::vector<std::int8_t> y(labels.size());
    for (std::size_t b = 0; b < B; ++b) {
        std::size_t k = 0;
        for (std::size_t i = 0; i < pos_idx.size(); ++i, ++k) {
            const std::size_t j = pos_idx[static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<std::int64_t>(pos_idx.size()) - 1))];
            s[k] = scores[j];
            y[k] = 1;
        }
        for (std::size_t i = 0; i < neg_idx.size(); ++i, ++k) {
            const std::size_t j = neg_idx[static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<std::int64_t>(neg_idx.size()) - 1))];
            s[k] = scores[j];
            y[k] = 0;
        }
        aucs.push_back(auc_score(s, y));
    }
    std::sort(aucs.begin(), aucs.end());
    const auto quantile = [&](double p) {
        const double idx = p * static_cast<double>(B - 1);
        const std::size_t lo = static_cast<std::size_t>(std::floor(idx));
        const std::size_t hi = std::min(lo + 1, B - 1);
        const double w = idx - static_cast<double>(lo);
        return (1.0 - w) * aucs[lo] + w * aucs[hi];
    };
    const double alpha = 1.0 - level;
    return {quantile(alpha / 2.0), quantile(1.0 - alpha / 2.0)};
}

struct SignificanceResult {
    bool significant = false;
    double ci_low = 0;
    double ci_high = 0;
};

/// Better than chance iff the bootstrap CI lies entirely above 0.5.
inline SignificanceResult significance_vs_chance(const std::vector<double>& scores,
                                                 const std::vector<std::int8_t>& labels,
                                                 std::size_t B = 1000, std::uint64_t seed = 0) {
    const auto [lo, hi] = bootstrap_ci(scores, labels, B, 0.95, seed);
    return {lo > 0.5, lo, hi};
}

struct CvReport {
    std::vector<double> fold_aucs;
    double mean = 0;
    double sd = 0;  // population standard deviation over folds
    std::vector<std::pair<std::size_t, std::size_t>> boundaries;  // (train_end, test_end) rows
};

/// Rolling-window time-series cross validation with expanding windows: fold k
/// covers the first k/folds of the rows, split 70/30 chronologically inside.
/// `fit` receives (train, test) frames and returns scores for the test rows.
inline CvReport rolling_cv(
    const FeatureFrame& frame, std::size_t folds, double train_frac,
    const std::function<std::vector<double>(const FeatureFrame&, const FeatureFrame&)>& fit) {
    if (folds < 1) throw ConfigError("rolling_cv: folds must be >= 1");
    if (!(train_frac > 0 && train_frac < 1)) throw ConfigError("rolling_cv: train_frac in (0,1)");
    if (!frame.labeled()) throw DataError("rolling_cv: frame is unlabeled");
    const std::size_t n = frame.n_rows();

    CvReport report;
    for (std::size_t k = 1; k <= folds; ++k) {
        const std::size_t end = n * k / folds;
        const std::size_t split = static_cast<std::size_t>(
            std::floor(train_frac * static_cast<double>(end)));
        if (split == 0 || split >= end)
            throw DataError("rolling_cv: insufficient rows for fold " + std::to_string(k));
        FeatureFrame train = frame;
        FeatureFrame test = frame;
        train.data.assign(frame.data.begin(), frame.data.begin() + split);
        train.dates.assign(frame.dates.begin(), frame.dates.begin() + split);
        train.target.assign(frame.target.begin(), frame.target.begin() + split);
        test.data.assign(frame.data.begin() + split, frame.data.begin() + end);
        test.dates.assign(frame.dates.begin() + split, frame.dates.begin() + end);
        test.target.assign(frame.target.begin() + split, frame.target.begin() + end);
        if (frame.pooled()) {
            train.asset_ids.assign(frame.asset_ids.begin(), frame.asset_ids.begin() + split);
            test.asset_ids.assign(frame.asset_ids.begin() + split, frame.asset_ids.begin() + end);
        }
        train.positions.clear();
        test.positions.clear();
        const std::vector<double> scores = fit(train, test);
        report.fold_aucs.push_back(auc_score(scores, test.target));
        report.boundaries.emplace_back(split, end);
    }
    const double n_folds = static_cast<double>(report.fold_aucs.size());
    for (double a : report.fold_aucs) report.mean += a;
    report.mean /= n_folds;
    for (double a : report.fold_aucs) report.sd += (a - report.mean) * (a - report.mean);
    report.sd = std::sqrt(report.sd / n_folds);
    return report;
}

/// Train-minus-test gaps used as overfitting signals.
inline std::pair<double, double> diff_metrics(const EvalReport& train, const EvalReport& test) {
    return {train.auc - test.auc, train.acc - test.acc};
}

}  // namespace finpred
