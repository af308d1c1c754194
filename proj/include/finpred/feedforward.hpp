#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "finpred/forest.hpp"
#include "finpred/frame.hpp"
#include "finpred/rng.hpp"

namespace finpred {

inline double relu(double x) { return x > 0 ? x : 0.0; }

/// Stable binary cross-entropy from the logit.
inline double bce_from_logit(double z, double y) {
    return std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
}

/// Adaptive-moment state over a list of parameter blocks.
struct AdamState {
    std::vector<double> m, v;
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    int t = 0;

    explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}

    void step(const std::vector<std::vector<double>*>& params, const std::vector<double>& grad,
              double lr) {
        ++t;
        const double bc1 = 1.0 - std::pow(beta1, t);
        const double bc2 = 1.0 - std::pow(beta2, t);
        std::size_t k = 0;
        for (auto* block : params) {
            for (double& x : *block) {
                m[k] = beta1 * m[k] + (1 - beta1) * grad[k];
                v[k] = beta2 * v[k] + (1 - beta2) * grad[k] * grad[k];
                x -= lr * (m[k] / bc1) / (std::sqrt(v[k] / bc2) + eps);
                ++k;
            }
        }
    }
};

/// Two hidden rectified layers with dropout, logistic output, binary
/// cross-entropy loss, adaptive-moment gradient descent.
struct NnConfig {
    int hidden1 = 0;  // 0 resolves to (input_dim)^2 at fit time
    int hidden2 = 256;  // 0 drops the second hidden layer (single-hidden nets)
    double dropout = 0.3;
    double learning_rate = 0.01;
    int epochs = 100;
    int batch_size = 32;
    std::uint64_t seed = 0;

    void validate() const {
        if (hidden1 < 0 || hidden2 < 0) throw ConfigError("nn: hidden sizes must be >= 0");
        if (!(dropout >= 0 && dropout < 1)) throw ConfigError("nn: dropout in [0,1)");
        if (!(learning_rate > 0)) throw ConfigError("nn: learning_rate must be > 0");
        if (epochs < 1 || batch_size < 1) throw ConfigError("nn: epochs/batch_size must be >= 1");
    }
};

class FeedForwardModel {
  public:
    NnConfig config;
    std::vector<std::string> feature_names;
    int d_in = 0, h1 = 0, h2 = 0;
    // Row-major weight blocks; the output bias lives in a one-element block
    // so the flat parameter order is [w1, b1, w2, b2, w3, b3].
    std::vector<double> w1, b1, w2, b2, w3, b3{0.0};

    /// Allocate and seed parameters for a given input width. fit() calls this;
    /// it is public so tiny nets can be gradient-checked without training.
    void initialize(int input_dim, const std::vector<std::string>& names) {
        config.validate();
        feature_names = names;
        d_in = input_dim;
        h1 = config.hidden1 > 0 ? config.hidden1 : d_in * d_in;
        h2 = config.hidden2;
        Rng rng(derive_seed(config.seed, "nn-init"));
        const auto init = [&](std::vector<double>& w, std::size_t n, double fan_in) {
            w.resize(n);
            const double bound = 1.0 / std::sqrt(fan_in);
            for (double& x : w) x = rng.uniform(-bound, bound);
        };
        init(w1, static_cast<std::size_t>(h1) * d_in, d_in);
        init(w2, static_cast<std::size_t>(h2) * h1, std::max(h1, 1));
        init(w3, static_cast<std::size_t>(h2 > 0 ? h2 : h1), h2 > 0 ? h2 : h1);
        b1.assign(h1, 0.0);
        b2.assign(h2, 0.0);
        b3.assign(1, 0.0);
    }

    void fit(const FeatureFrame& frame) {
        detail::check_trainable(frame, 2);
        initialize(static_cast<int>(frame.n_cols()), frame.columns);

        AdamState adam(n_params());
        std::vector<std::size_t> order(frame.n_rows());
        std::iota(order.begin(), order.end(), std::size_t{0});

        for (int epoch = 0; epoch < config.epochs; ++epoch) {
            Rng epoch_rng(derive_seed(config.seed, "nn-epoch-" + std::to_string(epoch)));
            epoch_rng.shuffle(order);
            for (std::size_t start = 0; start < order.size();
                 start += static_cast<std::size_t>(config.batch_size)) {
                const std::size_t end =
                    std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
                std::vector<double> grad(n_params(), 0.0);
                double loss = 0;
                for (std::size_t k = start; k < end; ++k)
                    loss += backprop_row(frame.data[order[k]], frame.target[order[k]], grad,
                                         1.0 / static_cast<double>(end - start), &epoch_rng);
                if (!std::isfinite(loss))
                    throw NumericError("nn: loss diverged at epoch " + std::to_string(epoch));
                adam.step(param_blocks(), grad, config.learning_rate);
            }
        }
    }

    /// Deterministic inference: dropout is a training-time regularizer only.
    std::vector<double> predict_proba(const FeatureFrame& frame) const {
        if (feature_names.empty()) throw DataError("feedforward model is not fitted");
        const auto mapping = detail::feature_mapping(feature_names, frame);
        std::vector<double> out(frame.n_rows());
        for (std::size_t r = 0; r < frame.n_rows(); ++r)
            out[r] = logistic(forward_logit(detail::gather_row(frame.data[r], mapping)));
        return out;
    }

    // --- flat parameter access (gradient checks, persistence) ---

    std::size_t n_params() const {
        return w1.size() + b1.size() + w2.size() + b2.size() + w3.size() + b3.size();
    }

    std::vector<std::vector<double>*> param_blocks() {
        return {&w1, &b1, &w2, &b2, &w3, &b3};
    }

    std::vector<double> parameters() const {
        std::vector<double> p;
        p.reserve(n_params());
        for (const auto* block : {&w1, &b1, &w2, &b2, &w3, &b3})
            p.insert(p.end(), block->begin(), block->end());
        return p;
    }

    void set_parameters(const std::vector<double>& p) {
        std::size_t k = 0;
        for (auto* block : param_blocks())
            for (double& x : *block) x = p[k++];
    }

    /// Mean BCE with dropout disabled (the deterministic loss the gradient
    /// check differentiates).
    double loss(const FeatureFrame& frame) const {
        double total = 0;
        for (std::size_t r = 0; r < frame.n_rows(); ++r)
            total += bce_from_logit(forward_logit(frame.data[r]), frame.target[r]);
        return total / static_cast<double>(frame.n_rows());
    }

    std::vector<double> loss_gradient(const FeatureFrame& frame) {
        std::vector<double> grad(n_params(), 0.0);
        for (std::size_t r = 0; r < frame.n_rows(); ++r)
            backprop_row(frame.data[r], frame.target[r], grad,
                         1.0 / static_cast<double>(frame.n_rows()), nullptr);
        return grad;
    }

  private:
    double forward_logit(const std::vector<double>& x) const {
        std::vector<double> a1(h1), a2(h2);
        for (int i = 0; i < h1; ++i) {
            double z = b1[i];
            for (int j = 0; j < d_in; ++j) z += w1[static_cast<std::size_t>(i) * d_in + j] * x[j];
            a1[i] = relu(z);
        }
        for (int i = 0; i < h2; ++i) {
            double z = b2[i];
            for (int j = 0; j < h1; ++j) z += w2[static_cast<std::size_t>(i) * h1 + j] * a1[j];
            a2[i] = relu(z);
        }
        const auto& last = h2 > 0 ? a2 : a1;
        double z3 = b3[0];
        for (std::size_t i = 0; i < last.size(); ++i) z3 += w3[i] * last[i];
        return z3;
    }

    /// One-sample forward/backward; returns the scaled loss contribution.
    /// A non-null rng enables inverted dropout on both hidden layers.
    double backprop_row(const std::vector<double>& x, double y, std::vector<double>& grad,
                        double scale, Rng* dropout_rng) {
        std::vector<double> z1(h1), a1(h1), z2(h2), a2(h2);
        std::vector<double> mask1(h1, 1.0), mask2(h2, 1.0);
        const double keep = 1.0 - config.dropout;
        const bool drop = dropout_rng != nullptr && config.dropout > 0;
        for (int i = 0; i < h1; ++i) {
            double z = b1[i];
            for (int j = 0; j < d_in; ++j) z += w1[static_cast<std::size_t>(i) * d_in + j] * x[j];
            z1[i] = z;
            a1[i] = relu(z);
            if (drop) {
                mask1[i] = dropout_rng->uniform() < keep ? 1.0 / keep : 0.0;
                a1[i] *= mask1[i];
            }
        }
        for (int i = 0; i < h2; ++i) {
            double z = b2[i];
            for (int j = 0; j < h1; ++j) z += w2[static_cast<std::size_t>(i) * h1 + j] * a1[j];
            z2[i] = z;
            a2[i] = relu(z);
            if (drop) {
                mask2[i] = dropout_rng->uniform() < keep ? 1.0 / keep : 0.0;
                a2[i] *= mask2[i];
            }
        }
        const auto& last = h2 > 0 ? a2 : a1;
        double z3 = b3[0];
        for (std::size_t i = 0; i < last.size(); ++i) z3 += w3[i] * last[i];
        const double p = logistic(z3);
        const double loss = bce_from_logit(z3, y) * scale;

        const std::size_t o_w1 = 0;
        const std::size_t o_b1 = o_w1 + w1.size();
        const std::size_t o_w2 = o_b1 + b1.size();
        const std::size_t o_b2 = o_w2 + w2.size();
        const std::size_t o_w3 = o_b2 + b2.size();
        const std::size_t o_b3 = o_w3 + w3.size();

        const double dz3 = (p - y) * scale;
        grad[o_b3] += dz3;
        std::vector<double> da1(h1, 0.0);
        if (h2 == 0) {
            for (int i = 0; i < h1; ++i) {
                grad[o_w3 + i] += dz3 * a1[i];
                da1[i] = dz3 * w3[i];
            }
        }
        for (int i = 0; i < h2; ++i) {
            grad[o_w3 + i] += dz3 * a2[i];
            const double da2 = dz3 * w3[i] * mask2[i];
            const double dz2 = z2[i] > 0 ? da2 : 0.0;
            if (dz2 == 0.0) continue;
            grad[o_b2 + i] += dz2;
            for (int j = 0; j < h1; ++j) {
                grad[o_w2 + static_cast<std::size_t>(i) * h1 + j] += dz2 * a1[j];
                da1[j] += dz2 * w2[static_cast<std::size_t>(i) * h1 + j];
            }
        }
        for (int i = 0; i < h1; ++i) {
            const double dz1 = z1[i] > 0 ? da1[i] * mask1[i] : 0.0;
            if (dz1 == 0.0) continue;
            grad[o_b1 + i] += dz1;
            for (int j = 0; j < d_in; ++j)
                grad[o_w1 + static_cast<std::size_t>(i) * d_in + j] += dz1 * x[j];
        }
        return loss;
    }
};

}  // namespace finpred
