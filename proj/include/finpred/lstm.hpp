#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "finpred/feedforward.hpp"
#include "finpred/frame.hpp"
#include "finpred/metrics.hpp"
#include "finpred/rng.hpp"

namespace finpred {

struct LstmConfig {
    int epochs = 40;
    int layers = 8;
    int window = 30;
    int hidden = 32;
    double learning_rate = 0.001;
    int batch_size = 32;
    std::uint64_t seed = 0;

    void validate() const {
        if (epochs < 1 || layers < 1 || window < 1 || hidden < 1)
            throw ConfigError("lstm: epochs/layers/window/hidden must be >= 1");
        if (!(learning_rate > 0)) throw ConfigError("lstm: learning_rate must be > 0");
        if (batch_size < 1) throw ConfigError("lstm: batch_size must be >= 1");
    }
};

/// Chronological fractions; no shuffling across the time axis. Order along
/// the series is train, then test, then validation.
struct SplitSpec {
    double train = 0.6;
    double test = 0.3;
    double validation = 0.1;

    void validate() const {
        if (!(train > 0 && test > 0 && validation >= 0))
            throw ConfigError("split: train/test must be positive");
        if (std::abs(train + test + validation - 1.0) > 1e-9)
            throw ConfigError("split: fractions must sum to 1");
    }
};

struct SplitCounts {
    std::size_t n_train = 0, n_test = 0, n_val = 0;
};

inline SplitCounts chronological_split(std::size_t n, const SplitSpec& spec) {
    spec.validate();
    SplitCounts c;
    c.n_train = static_cast<std::size_t>(std::floor(spec.train * static_cast<double>(n)));
    c.n_test = static_cast<std::size_t>(std::floor(spec.test * static_cast<double>(n)));
    c.n_val = n - c.n_train - c.n_test;
    return c;
}

/// Sliding windows over frame rows. Each window is `window` consecutive rows;
/// the label is the target at the window's last row, and windows with an
/// undefined label are excluded.
struct WindowSet {
    std::size_t window = 0;
    std::vector<std::size_t> last_rows;
    std::vector<std::int8_t> labels;

    std::size_t size() const { return last_rows.size(); }
};

inline WindowSet make_windows(const FeatureFrame& frame, int window) {
    if (window < 1) throw ConfigError("window must be >= 1");
    if (frame.n_rows() < static_cast<std::size_t>(window))
        throw DataError("frame has " + std::to_string(frame.n_rows()) + " rows; window " +
                        std::to_string(window) + " needs at least that many");
    if (!frame.labeled()) throw DataError("make_windows: frame is unlabeled");
    WindowSet set;
    set.window = static_cast<std::size_t>(window);
    for (std::size_t last = set.window - 1; last < frame.n_rows(); ++last) {
        if (frame.target[last] < 0) continue;
        set.last_rows.push_back(last);
        set.labels.push_back(frame.target[last]);
    }
    return set;
}

/// Stacked LSTM binary classifier. Gate order inside every 4H block is
/// [input, forget, candidate, output]; weights are row-major.
class LstmModel {
  public:
    LstmConfig config;
    std::vector<std::string> feature_names;
    std::vector<double> feat_mean, feat_sd;  // from the training split only

    struct Layer {
        std::vector<double> wx;  // 4H x D_in
        std::vector<double> wh;  // 4H x H
        std::vector<double> b;   // 4H
        int d_in = 0;
    };
    std::vector<Layer> layers;
    std::vector<double> w_out;  // H
    std::vector<double> b_out{0.0};

    int hidden() const { return config.hidden; }

    void initialize(const std::vector<std::string>& names) {
        config.validate();
        feature_names = names;
        const int H = config.hidden;
        Rng rng(derive_seed(config.seed, "lstm-init"));
        layers.assign(config.layers, {});
        for (int l = 0; l < config.layers; ++l) {
            Layer& layer = layers[l];
            layer.d_in = l == 0 ? static_cast<int>(names.size()) : H;
            const auto init = [&](std::vector<double>& w, std::size_t n, double fan_in) {
                w.resize(n);
                const double bound = 1.0 / std::sqrt(fan_in);
                for (double& x : w) x = rng.uniform(-bound, bound);
            };
            init(layer.wx, static_cast<std::size_t>(4 * H) * layer.d_in, layer.d_in);
            init(layer.wh, static_cast<std::size_t>(4 * H) * H, H);
            layer.b.assign(4 * H, 0.0);
            for (int u = 0; u < H; ++u) layer.b[H + u] = 1.0;  // forget-gate bias stabilizer
        }
        const double bound = 1.0 / std::sqrt(static_cast<double>(H));
        w_out.resize(H);
        for (double& x : w_out) x = rng.uniform(-bound, bound);
        b_out.assign(1, 0.0);
        feat_mean.assign(names.size(), 0.0);
        feat_sd.assign(names.size(), 1.0);
    }

    /// Normalization stats over rows [0, last_train_row], i.e. the training
    /// split only.
    void fit_normalization(const FeatureFrame& frame, std::size_t last_train_row) {
        const std::size_t n = last_train_row + 1;
        for (std::size_t c = 0; c < frame.n_cols(); ++c) {
            double mean = 0;
            for (std::size_t r = 0; r < n; ++r) mean += frame.data[r][c];
            mean /= static_cast<double>(n);
            double var = 0;
            for (std::size_t r = 0; r < n; ++r) {
                const double d = frame.data[r][c] - mean;
                var += d * d;
            }
            const double sd = std::sqrt(var / static_cast<double>(n));
            feat_mean[c] = mean;
            feat_sd[c] = sd > 0 ? sd : 1.0;
        }
    }

    double predict_window(const FeatureFrame& frame, std::size_t last_row) const {
        std::vector<double> h_final;
        forward_window(frame, last_row, h_final, nullptr);
        double z = b_out[0];
        for (int u = 0; u < config.hidden; ++u) z += w_out[u] * h_final[u];
        return logistic(z);
    }

    std::vector<double> predict_proba(const FeatureFrame& frame, const WindowSet& windows) const {
        std::vector<double> out(windows.size());
        for (std::size_t k = 0; k < windows.size(); ++k)
            out[k] = predict_window(frame, windows.last_rows[k]);
        return out;
    }

    // --- flat parameter access ---

    std::vector<std::vector<double>*> param_blocks() {
        std::vector<std::vector<double>*> blocks;
        for (auto& layer : layers) {
            blocks.push_back(&layer.wx);
            blocks.push_back(&layer.wh);
            blocks.push_back(&layer.b);
        }
        blocks.push_back(&w_out);
        blocks.push_back(&b_out);
        return blocks;
    }

    std::size_t n_params() const {
        std::size_t n = 0;
        for (const auto& layer : layers) n += layer.wx.size() + layer.wh.size() + layer.b.size();
        return n + w_out.size() + b_out.size();
    }

    std::vector<double> parameters() const {
        std::vector<double> p;
        p.reserve(n_params());
        for (const auto& layer : layers)
            for (const auto* block : {&layer.wx, &layer.wh, &layer.b})
                p.insert(p.end(), block->begin(), block->end());
        p.insert(p.end(), w_out.begin(), w_out.end());
        p.insert(p.end(), b_out.begin(), b_out.end());
        return p;
    }

    void set_parameters(const std::vector<double>& p) {
        std::size_t k = 0;
        for (auto* block : param_blocks())
            for (double& x : *block) x = p[k++];
    }

    /// Mean BCE over the given windows (deterministic; used by training and
    /// by the finite-difference checks).
    double loss(const FeatureFrame& frame, const WindowSet& windows,
                const std::vector<std::size_t>& which) const {
        double total = 0;
        for (std::size_t k : which) {
            std::vector<double> h_final;
            forward_window(frame, windows.last_rows[k], h_final, nullptr);
            double z = b_out[0];
            for (int u = 0; u < config.hidden; ++u) z += w_out[u] * h_final[u];
            total += bce_from_logit(z, windows.labels[k]);
        }
        return total / static_cast<double>(which.size());
    }

    std::vector<double> loss_gradient(const FeatureFrame& frame, const WindowSet& windows,
                                      const std::vector<std::size_t>& which) const {
        std::vector<double> grad(n_params(), 0.0);
        for (std::size_t k : which)
            backprop_window(frame, windows.last_rows[k], windows.labels[k], grad,
                            1.0 / static_cast<double>(which.size()));
        return grad;
    }

    /// Combined loss + gradient for one batch (saves the second forward pass
    /// during training).
    double loss_and_gradient(const FeatureFrame& frame, const WindowSet& windows,
                             const std::vector<std::size_t>& which,
                             std::vector<double>& grad) const {
        std::fill(grad.begin(), grad.end(), 0.0);
        double total = 0;
        for (std::size_t k : which)
            total += backprop_window(frame, windows.last_rows[k], windows.labels[k], grad,
                                     1.0 / static_cast<double>(which.size()));
        return total;
    }

    double backprop_window(const FeatureFrame& frame, std::size_t last_row, double label,
                           std::vector<double>& grad, double scale) const;

  private:
    struct Cache {
        // Per layer, per time step: gates and states.
        std::vector<std::vector<double>> x;   // input vectors per (l,t)
        std::vector<std::vector<double>> i, f, g, o, c, tanh_c, h;
    };

    void forward_window(const FeatureFrame& frame, std::size_t last_row,
                        std::vector<double>& h_final, Cache* cache) const {
        const int H = config.hidden;
        const int T = config.window;
        const int L = config.layers;
        const std::size_t first_row = last_row + 1 - static_cast<std::size_t>(T);

        std::vector<std::vector<double>> h_prev(L, std::vector<double>(H, 0.0));
        std::vector<std::vector<double>> c_prev(L, std::vector<double>(H, 0.0));
        if (cache) {
            const std::size_t slots = static_cast<std::size_t>(L) * T;
            cache->x.assign(slots, {});
            cache->i.assign(slots, {});
            cache->f.assign(slots, {});
            cache->g.assign(slots, {});
            cache->o.assign(slots, {});
            cache->c.assign(slots, {});
            cache->tanh_c.assign(slots, {});
            cache->h.assign(slots, {});
        }

        std::vector<double> x;
        for (int t = 0; t < T; ++t) {
            x.assign(frame.data[first_row + t].begin(), frame.data[first_row + t].end());
            for (std::size_t c = 0; c < x.size(); ++c) x[c] = (x[c] - feat_mean[c]) / feat_sd[c];
            for (int l = 0; l < L; ++l) {
                const Layer& layer = layers[l];
                std::vector<double> zi(H), zf(H), zg(H), zo(H);
                for (int u = 0; u < H; ++u) {
                    double si = layer.b[u];
                    double sf = layer.b[H + u];
                    double sg = layer.b[2 * H + u];
                    double so = layer.b[3 * H + u];
                    const std::size_t rx_i = static_cast<std::size_t>(u) * layer.d_in;
                    const std::size_t rx_f = static_cast<std::size_t>(H + u) * layer.d_in;
                    const std::size_t rx_g = static_cast<std::size_t>(2 * H + u) * layer.d_in;
                    const std::size_t rx_o = static_cast<std::size_t>(3 * H + u) * layer.d_in;
                    for (int j = 0; j < layer.d_in; ++j) {
                        const double xj = x[j];
                        si += layer.wx[rx_i + j] * xj;
                        sf += layer.wx[rx_f + j] * xj;
                        sg += layer.wx[rx_g + j] * xj;
                        so += layer.wx[rx_o + j] * xj;
                    }
                    const std::size_t rh_i = static_cast<std::size_t>(u) * H;
                    const std::size_t rh_f = static_cast<std::size_t>(H + u) * H;
                    const std::size_t rh_g = static_cast<std::size_t>(2 * H + u) * H;
                    const std::size_t rh_o = static_cast<std::size_t>(3 * H + u) * H;
                    for (int j = 0; j < H; ++j) {
                        const double hj = h_prev[l][j];
                        si += layer.wh[rh_i + j] * hj;
                        sf += layer.wh[rh_f + j] * hj;
                        sg += layer.wh[rh_g + j] * hj;
                        so += layer.wh[rh_o + j] * hj;
                    }
                    zi[u] = si;
                    zf[u] = sf;
                    zg[u] = sg;
                    zo[u] = so;
                }
                std::vector<double> i_t(H), f_t(H), g_t(H), o_t(H), c_t(H), th_t(H), h_t(H);
                for (int u = 0; u < H; ++u) {
                    i_t[u] = logistic(zi[u]);
                    f_t[u] = logistic(zf[u]);
                    g_t[u] = std::tanh(zg[u]);
                    o_t[u] = logistic(zo[u]);
                    c_t[u] = f_t[u] * c_prev[l][u] + i_t[u] * g_t[u];
                    th_t[u] = std::tanh(c_t[u]);
                    h_t[u] = o_t[u] * th_t[u];
                }
                if (cache) {
                    const std::size_t slot = static_cast<std::size_t>(l) * T + t;
                    cache->x[slot] = x;
                    cache->i[slot] = i_t;
                    cache->f[slot] = f_t;
                    cache->g[slot] = g_t;
                    cache->o[slot] = o_t;
                    cache->c[slot] = c_t;
                    cache->tanh_c[slot] = th_t;
                    cache->h[slot] = h_t;
                }
                c_prev[l] = c_t;
                h_prev[l] = h_t;
                x = h_t;
            }
        }
        h_final = h_prev[L - 1];
    }

};

/// Full backpropagation through time for one window; gradients accumulate in
/// the flat layout produced by parameters(). Returns the scaled loss term.
inline double LstmModel::backprop_window(const FeatureFrame& frame, std::size_t last_row,
                                         double label, std::vector<double>& grad,
                                         double scale) const {
    const int H = config.hidden;
    const int T = config.window;
    const int L = config.layers;
    Cache cache;
    std::vector<double> h_final;
    forward_window(frame, last_row, h_final, &cache);

    double z = b_out[0];
    for (int u = 0; u < H; ++u) z += w_out[u] * h_final[u];
    const double p = logistic(z);
    const double dz = (p - label) * scale;

    // Offsets of each parameter block in the flat gradient.
    std::vector<std::size_t> off_wx(L), off_wh(L), off_b(L);
    std::size_t off = 0;
    for (int l = 0; l < L; ++l) {
        off_wx[l] = off;
        off += layers[l].wx.size();
        off_wh[l] = off;
        off += layers[l].wh.size();
        off_b[l] = off;
        off += layers[l].b.size();
    }
    const std::size_t off_wout = off;
    const std::size_t off_bout = off + w_out.size();

    grad[off_bout] += dz;
    for (int u = 0; u < H; ++u) grad[off_wout + u] += dz * h_final[u];

    // dh[l], dc[l]: gradients flowing into h_{l,t}, c_{l,t} from the future.
    std::vector<std::vector<double>> dh(L, std::vector<double>(H, 0.0));
    std::vector<std::vector<double>> dc(L, std::vector<double>(H, 0.0));
    for (int u = 0; u < H; ++u) dh[L - 1][u] = dz * w_out[u];

    std::vector<double> dzi(H), dzf(H), dzg(H), dzo(H);
    for (int t = T - 1; t >= 0; --t) {
        std::vector<double> dx_above;  // gradient wrt layer l's input at time t
        for (int l = L - 1; l >= 0; --l) {
            const Layer& layer = layers[l];
            const std::size_t slot = static_cast<std::size_t>(l) * T + t;
            std::vector<double> dh_total = dh[l];
            if (l < L - 1)
                for (int u = 0; u < H; ++u) dh_total[u] += dx_above[u];

            const auto& i_t = cache.i[slot];
            const auto& f_t = cache.f[slot];
            const auto& g_t = cache.g[slot];
            const auto& o_t = cache.o[slot];
            const auto& th_t = cache.tanh_c[slot];
            const std::vector<double>* c_prev = nullptr;
            if (t > 0) c_prev = &cache.c[slot - 1];

            for (int u = 0; u < H; ++u) {
                const double do_u = dh_total[u] * th_t[u];
                const double dct = dh_total[u] * o_t[u] * (1.0 - th_t[u] * th_t[u]) + dc[l][u];
                const double cp = c_prev ? (*c_prev)[u] : 0.0;
                dzo[u] = do_u * o_t[u] * (1.0 - o_t[u]);
                dzf[u] = dct * cp * f_t[u] * (1.0 - f_t[u]);
                dzi[u] = dct * g_t[u] * i_t[u] * (1.0 - i_t[u]);
                dzg[u] = dct * i_t[u] * (1.0 - g_t[u] * g_t[u]);
                dc[l][u] = dct * f_t[u];
            }

            const auto& x_t = cache.x[slot];
            const std::vector<double>* h_prev = (t > 0) ? &cache.h[slot - 1] : nullptr;
            std::vector<double> dh_prev(H, 0.0);
            std::vector<double> dx(layer.d_in, 0.0);
            for (int u = 0; u < H; ++u) {
                const double dgate[4] = {dzi[u], dzf[u], dzg[u], dzo[u]};
                for (int gate = 0; gate < 4; ++gate) {
                    const double dval = dgate[gate];
                    if (dval == 0.0) continue;
                    const std::size_t row = static_cast<std::size_t>(gate * H + u);
                    const std::size_t rx = row * layer.d_in;
                    const std::size_t rh = row * H;
                    grad[off_b[l] + row] += dval;
                    for (int j = 0; j < layer.d_in; ++j) {
                        grad[off_wx[l] + rx + j] += dval * x_t[j];
                        dx[j] += dval * layer.wx[rx + j];
                    }
                    const double hp_scale = dval;
                    for (int j = 0; j < H; ++j) {
                        const double hj = h_prev ? (*h_prev)[j] : 0.0;
                        grad[off_wh[l] + rh + j] += hp_scale * hj;
                        dh_prev[j] += hp_scale * layer.wh[rh + j];
                    }
                }
            }
            dh[l] = dh_prev;  // flows to t-1
            dx_above = dx;    // flows to layer l-1 at time t
        }
    }
    return bce_from_logit(z, label) * scale;
}

// ---------------------------------------------------------------------------
// Training, summaries, greedy configuration search
// ---------------------------------------------------------------------------

/// Per-asset evaluation record: the AUC pair, the overfitting gap, and the
/// per-date probabilities on every split (0 train, 1 test, 2 validation).
struct TechnicalModelSummary {
    std::string asset_id;
    double train_auc = metric_undefined;
    double test_auc = metric_undefined;
    double diff_auc = metric_undefined;
    double train_acc = metric_undefined;
    double test_acc = metric_undefined;
    double prob_min = metric_undefined;
    double prob_max = metric_undefined;
    std::vector<Date> dates;
    std::vector<double> probs;
    std::vector<std::int8_t> split;
    std::vector<std::int8_t> labels;
    bool train_degenerate = false;
    bool test_degenerate = false;
};

inline void check_split_counts(const SplitCounts& counts, const SplitSpec& spec,
                               const std::string& asset_id) {
    if (counts.n_train == 0 || counts.n_test == 0 || (spec.validation > 0 && counts.n_val == 0))
        throw DataError("asset '" + asset_id + "' excluded: a chronological split is empty (" +
                        std::to_string(counts.n_train) + "/" + std::to_string(counts.n_test) +
                        "/" + std::to_string(counts.n_val) + ")");
}

inline LstmModel fit_lstm(const FeatureFrame& frame, const LstmConfig& config,
                          const SplitSpec& split, const std::string& asset_id = "") {
    config.validate();
    const WindowSet windows = make_windows(frame, config.window);
    const SplitCounts counts = chronological_split(windows.size(), split);
    check_split_counts(counts, split, asset_id);

    LstmModel model;
    model.config = config;
    model.initialize(frame.columns);
    model.fit_normalization(frame, windows.last_rows[counts.n_train - 1]);

    AdamState adam(model.n_params());
    std::vector<std::size_t> order(counts.n_train);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> grad(model.n_params());
    const auto blocks = model.param_blocks();

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        Rng epoch_rng(derive_seed(config.seed, "lstm-epoch-" + std::to_string(epoch)));
        epoch_rng.shuffle(order);
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t end =
                std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
            const std::vector<std::size_t> batch(order.begin() + start, order.begin() + end);
            const double loss = model.loss_and_gradient(frame, windows, batch, grad);
            if (!std::isfinite(loss))
                throw NumericError("lstm: loss diverged at epoch " + std::to_string(epoch));
            adam.step(blocks, grad, config.learning_rate);
        }
    }
    return model;
}

inline TechnicalModelSummary summarize(const LstmModel& model, const FeatureFrame& frame,
                                       const SplitSpec& split, const std::string& asset_id = "") {
    const WindowSet windows = make_windows(frame, model.config.window);
    const SplitCounts counts = chronological_split(windows.size(), split);
    check_split_counts(counts, split, asset_id);

    TechnicalModelSummary summary;
    summary.asset_id = asset_id;
    summary.probs = model.predict_proba(frame, windows);
    summary.labels = windows.labels;
    for (std::size_t k = 0; k < windows.size(); ++k) {
        summary.dates.push_back(frame.dates[windows.last_rows[k]]);
        summary.split.push_back(k < counts.n_train ? 0 : (k < counts.n_train + counts.n_test ? 1 : 2));
    }

    const auto slice = [&](int which) {
        std::pair<std::vector<double>, std::vector<std::int8_t>> out;
        for (std::size_t k = 0; k < windows.size(); ++k) {
            if (summary.split[k] != which) continue;
            out.first.push_back(summary.probs[k]);
            out.second.push_back(summary.labels[k]);
        }
        return out;
    };
    const auto [train_p, train_y] = slice(0);
    const auto [test_p, test_y] = slice(1);

    const auto has_two = [](const std::vector<std::int8_t>& y) {
        bool pos = false, neg = false;
        for (auto v : y) (v > 0 ? pos : neg) = true;
        return pos && neg;
    };
    if (has_two(train_y)) {
        const auto report = confusion_report(train_p, train_y);
        summary.train_auc = report.auc;
        summary.train_acc = report.acc;
    } else {
        summary.train_degenerate = true;
    }
    if (has_two(test_y)) {
        const auto report = confusion_report(test_p, test_y);
        summary.test_auc = report.auc;
        summary.test_acc = report.acc;
    } else {
        summary.test_degenerate = true;
    }
    summary.diff_auc = summary.train_auc - summary.test_auc;
    if (!test_p.empty()) {
        summary.prob_min = *std::min_element(test_p.begin(), test_p.end());
        summary.prob_max = *std::max_element(test_p.begin(), test_p.end());
    }
    return summary;
}

/// Min-max weighting of a live probability against the test-split extremes,
/// clamped into [0,1].
inline double pond_prob(double prob, const TechnicalModelSummary& summary) {
    if (!(summary.prob_max > summary.prob_min))
        throw DataError("pond_prob: degenerate test distribution for asset '" +
                        summary.asset_id + "'");
    const double scaled = (prob - summary.prob_min) / (summary.prob_max - summary.prob_min);
    return std::min(1.0, std::max(0.0, scaled));
}

struct LstmGrid {
    std::vector<int> epochs = {20, 40, 60, 100};
    std::vector<int> layers = {1, 4, 8};
    std::vector<int> windows = {10, 20, 30};
};

using LstmTrainer = std::function<TechnicalModelSummary(const FeatureFrame&, const LstmConfig&,
                                                        const SplitSpec&)>;

inline LstmTrainer default_lstm_trainer(const std::string& asset_id = "") {
    return [asset_id](const FeatureFrame& frame, const LstmConfig& config,
                      const SplitSpec& split) {
        const LstmModel model = fit_lstm(frame, config, split, asset_id);
        return summarize(model, frame, split, asset_id);
    };
}

/// Coordinate-wise greedy search: epochs first (others at their incoming
/// values), then layers, then window; selection criterion is test AUC, with
/// ties keeping the earlier grid value.
inline std::pair<LstmConfig, TechnicalModelSummary> greedy_search(
    const FeatureFrame& frame, const LstmGrid& grid, LstmConfig base, const SplitSpec& split,
    const LstmTrainer& trainer) {
    if (grid.epochs.empty() || grid.layers.empty() || grid.windows.empty())
        throw ConfigError("greedy_search: grid has an empty dimension");

    LstmConfig current = base;
    TechnicalModelSummary best_summary;
    bool any_success = false;

    const auto sweep = [&](const std::vector<int>& values, auto&& apply) {
        double best_auc = -1.0;
        int best_value = values.front();
        TechnicalModelSummary stage_best;
        bool stage_success = false;
        for (int v : values) {
            LstmConfig candidate = current;
            apply(candidate, v);
            TechnicalModelSummary summary;
            try {
                summary = trainer(frame, candidate, split);
            } catch (const DataError&) {
                continue;  // candidate not trainable (e.g. window too large)
            } catch (const NumericError&) {
                continue;
            }
            if (std::isnan(summary.test_auc)) continue;
            stage_success = true;
            if (summary.test_auc > best_auc) {
                best_auc = summary.test_auc;
                best_value = v;
                stage_best = summary;
            }
        }
        if (!stage_success) throw DataError("greedy_search: all candidates failed to train");
        apply(current, best_value);
        best_summary = stage_best;
        any_success = true;
    };

    sweep(grid.epochs, [](LstmConfig& c, int v) { c.epochs = v; });
    sweep(grid.layers, [](LstmConfig& c, int v) { c.layers = v; });
    sweep(grid.windows, [](LstmConfig& c, int v) { c.window = v; });

    if (!any_success) throw DataError("greedy_search: all candidates failed to train");
    return {current, best_summary};
}

}  // namespace finpred
