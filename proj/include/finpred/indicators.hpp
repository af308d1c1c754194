#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "finpred/errors.hpp"
#include "finpred/frame.hpp"
#include "finpred/labeling.hpp"
#include "finpred/series.hpp"

namespace finpred {

/// One indicator output aligned to the price series. NaN marks positions
/// where the warm-up window (or a shift) leaves the value undefined.
struct IndicatorColumn {
    std::string name;
    std::vector<double> values;

    static constexpr double undefined = std::numeric_limits<double>::quiet_NaN();

    bool defined(std::size_t i) const { return !std::isnan(values[i]); }

    /// First defined position, or size() when the column is all-undefined.
    std::size_t first_defined() const {
        for (std::size_t i = 0; i < values.size(); ++i)
            if (defined(i)) return i;
        return values.size();
    }
};

namespace detail {

inline std::string fmt_real_param(double v) {
    std::string s = format_double(v);
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos) s += ".0";
    return s;
}

inline IndicatorColumn blank(std::string name, std::size_t n) {
    IndicatorColumn col;
    col.name = std::move(name);
    col.values.assign(n, IndicatorColumn::undefined);
    return col;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Trend indicators
// ---------------------------------------------------------------------------

inline IndicatorColumn sma(const PriceSeries& series, int n) {
    if (n < 1) throw ConfigError("sma: window must be >= 1");
    auto col = detail::blank("sma_" + std::to_string(n), series.size());
    if (static_cast<std::size_t>(n) > series.size()) return col;
    double sum = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        sum += series.close(i);
        if (i + 1 >= static_cast<std::size_t>(n)) {
            col.values[i] = sum / n;
            sum -= series.close(i + 1 - n);
        }
    }
    return col;
}

/// EMA seeded with the SMA of the first n closes, then
/// EMA_t = EMA_{t-1} + 2/(n+1) * (Close_t - EMA_{t-1}).
inline IndicatorColumn ema(const PriceSeries& series, int n) {
    if (n < 1) throw ConfigError("ema: window must be >= 1");
    auto col = detail::blank("ema_" + std::to_string(n), series.size());
    if (static_cast<std::size_t>(n) > series.size()) return col;
    double seed = 0;
    for (int i = 0; i < n; ++i) seed += series.close(i);
    seed /= n;
    const double alpha = 2.0 / (n + 1);
    double value = seed;
    col.values[n - 1] = value;
    for (std::size_t i = n; i < series.size(); ++i) {
        value += alpha * (series.close(i) - value);
        col.values[i] = value;
    }
    return col;
}

/// Five Ichimoku lines. ITS/IKS/ISB are window midpoints of (max high, min
/// low); ISA is the ITS/IKS midpoint. ISA and ISB are plotted shifted forward
/// by floor(p/2) positions, CS is the close shifted back by m.
inline std::array<IndicatorColumn, 5> ichimoku(const PriceSeries& series, int n = 9, int m = 26,
                                               int p = 52) {
    if (n < 1 || !(n <= m && m <= p)) throw ConfigError("ichimoku: requires 1 <= n <= m <= p");
    const std::size_t len = series.size();
    const std::string suffix =
        "_" + std::to_string(n) + "_" + std::to_string(m) + "_" + std::to_string(p);
    auto its = detail::blank("its" + suffix, len);
    auto iks = detail::blank("iks" + suffix, len);
    auto isa = detail::blank("isa" + suffix, len);
    auto isb = detail::blank("isb" + suffix, len);
    auto cs = detail::blank("cs" + suffix, len);

    const auto midpoint = [&](std::size_t i, int w) {
        double hi = series.bars[i].high;
        double lo = series.bars[i].low;
        for (std::size_t k = i + 1 - w; k < i; ++k) {
            hi = std::max(hi, series.bars[k].high);
            lo = std::min(lo, series.bars[k].low);
        }
        return (hi + lo) / 2.0;
    };

    std::vector<double> isa_raw(len, IndicatorColumn::undefined);
    std::vector<double> isb_raw(len, IndicatorColumn::undefined);
    for (std::size_t i = 0; i < len; ++i) {
        if (i + 1 >= static_cast<std::size_t>(n)) its.values[i] = midpoint(i, n);
        if (i + 1 >= static_cast<std::size_t>(m)) iks.values[i] = midpoint(i, m);
        if (i + 1 >= static_cast<std::size_t>(m))
            isa_raw[i] = (its.values[i] + iks.values[i]) / 2.0;
        if (i + 1 >= static_cast<std::size_t>(p)) isb_raw[i] = midpoint(i, p);
    }
    const std::size_t shift = static_cast<std::size_t>(p / 2);
    for (std::size_t i = shift; i < len; ++i) {
        isa.values[i] = isa_raw[i - shift];
        isb.values[i] = isb_raw[i - shift];
    }
    for (std::size_t i = 0; i + static_cast<std::size_t>(m) < len; ++i)
        cs.values[i] = series.close(i + m);
    return {its, iks, isa, isb, cs};
}

/// Literal directional-index loop: DI+ and DI- are raw high/low differences,
/// DX their normalized absolute spread (0 when the denominator vanishes), and
/// ADX the n-period recurrence seeded with the first DX.
inline IndicatorColumn adx(const PriceSeries& series, int n = 14) {
    if (n < 1) throw ConfigError("adx: window must be >= 1");
    if (series.size() < 2) throw ConfigError("adx: series length must be >= 2");
    auto col = detail::blank("adx_" + std::to_string(n), series.size());
    double adx_prev = 0;
    for (std::size_t t = 1; t < series.size(); ++t) {
        const double di_plus = series.bars[t].high - series.bars[t - 1].high;
        const double di_minus = series.bars[t - 1].low - series.bars[t].low;
        const double denom = std::abs(di_plus + di_minus);
        const double dx = denom == 0.0 ? 0.0 : std::abs(di_plus - di_minus) / denom;
        adx_prev = (t == 1) ? dx : (adx_prev * (n - 1) + dx) / n;
        col.values[t] = adx_prev;
    }
    return col;
}

// ---------------------------------------------------------------------------
// Momentum oscillators
// ---------------------------------------------------------------------------

/// RSI over simple means of the trailing n close-to-close gains and losses.
/// Zero average loss maps to 100, zero movement in both directions to 50.
inline IndicatorColumn rsi(const PriceSeries& series, int n) {
    if (n < 1) throw ConfigError("rsi: window must be >= 1");
    auto col = detail::blank("rsi_" + std::to_string(n), series.size());
    for (std::size_t i = static_cast<std::size_t>(n); i < series.size(); ++i) {
        double gain = 0, loss = 0;
        for (std::size_t t = i + 1 - n; t <= i; ++t) {
            const double diff = series.close(t) - series.close(t - 1);
            if (diff > 0)
                gain += diff;
            else
                loss -= diff;
        }
        const double avg_gain = gain / n;
        const double avg_loss = loss / n;
        if (avg_loss == 0.0)
            col.values[i] = avg_gain == 0.0 ? 50.0 : 100.0;
        else
            col.values[i] = 100.0 - 100.0 / (1.0 + avg_gain / avg_loss);
    }
    return col;
}

namespace detail {

/// EMA over the defined region of an arbitrary column, same seeding as ema().
inline IndicatorColumn ema_of(const IndicatorColumn& input, int n, std::string name) {
    auto col = blank(std::move(name), input.values.size());
    const std::size_t start = input.first_defined();
    if (start + n > input.values.size()) return col;
    double seed = 0;
    for (std::size_t i = start; i < start + n; ++i) seed += input.values[i];
    seed /= n;
    const double alpha = 2.0 / (n + 1);
    double value = seed;
    col.values[start + n - 1] = value;
    for (std::size_t i = start + n; i < input.values.size(); ++i) {
        value += alpha * (input.values[i] - value);
        col.values[i] = value;
    }
    return col;
}

}  // namespace detail

/// MACD line, signal line, histogram.
inline std::array<IndicatorColumn, 3> macd(const PriceSeries& series, int n = 12, int m = 26,
                                           int p = 9) {
    if (!(n >= 1 && n < m) || p < 1) throw ConfigError("macd: requires 1 <= n < m and p >= 1");
    const std::string suffix =
        "_" + std::to_string(n) + "_" + std::to_string(m) + "_" + std::to_string(p);
    const auto fast = ema(series, n);
    const auto slow = ema(series, m);
    auto line = detail::blank("macd" + suffix, series.size());
    for (std::size_t i = 0; i < series.size(); ++i)
        if (fast.defined(i) && slow.defined(i)) line.values[i] = fast.values[i] - slow.values[i];
    auto signal = detail::ema_of(line, p, "macds" + suffix);
    auto hist = detail::blank("macdh" + suffix, series.size());
    for (std::size_t i = 0; i < series.size(); ++i)
        if (line.defined(i) && signal.defined(i))
            hist.values[i] = line.values[i] - signal.values[i];
    return {line, signal, hist};
}

/// Williams %R in the paper's positive 0..100 convention; degenerate range -> 0.
inline IndicatorColumn williams_r(const PriceSeries& series, int n = 14) {
    if (n < 1) throw ConfigError("williams_r: window must be >= 1");
    auto col = detail::blank("willr_" + std::to_string(n), series.size());
    for (std::size_t i = static_cast<std::size_t>(n) - 1; i < series.size(); ++i) {
        double hi = series.bars[i].high;
        double lo = series.bars[i].low;
        for (std::size_t k = i + 1 - n; k < i; ++k) {
            hi = std::max(hi, series.bars[k].high);
            lo = std::min(lo, series.bars[k].low);
        }
        col.values[i] = (hi == lo) ? 0.0 : 100.0 * (hi - series.close(i)) / (hi - lo);
    }
    return col;
}

/// Stochastic oscillator: %K, its d-period SMA %D, and J = 3K - 2D.
/// A degenerate high/low range pins %K at 50.
inline std::array<IndicatorColumn, 3> kdj(const PriceSeries& series, int n = 14, int d = 3) {
    if (n < 1 || d < 1) throw ConfigError("kdj: windows must be >= 1");
    const std::string suffix = "_" + std::to_string(n) + "_" + std::to_string(d);
    auto k = detail::blank("k" + suffix, series.size());
    auto dd = detail::blank("d" + suffix, series.size());
    auto j = detail::blank("j" + suffix, series.size());
    for (std::size_t i = static_cast<std::size_t>(n) - 1; i < series.size(); ++i) {
        double hi = series.bars[i].high;
        double lo = series.bars[i].low;
        for (std::size_t t = i + 1 - n; t < i; ++t) {
            hi = std::max(hi, series.bars[t].high);
            lo = std::min(lo, series.bars[t].low);
        }
        k.values[i] = (hi == lo) ? 50.0 : 100.0 * (series.close(i) - lo) / (hi - lo);
    }
    const std::size_t k_start = k.first_defined();
    for (std::size_t i = k_start + d - 1; i < series.size(); ++i) {
        double sum = 0;
        for (std::size_t t = i + 1 - d; t <= i; ++t) sum += k.values[t];
        dd.values[i] = sum / d;
        j.values[i] = 3.0 * k.values[i] - 2.0 * dd.values[i];
    }
    return {k, dd, j};
}

/// Squeeze momentum as printed: (SMA_n - SMA_m) / (SMA_p * q). Positions
/// where SMA_p is zero are left undefined.
inline IndicatorColumn sqz(const PriceSeries& series, int n = 20, int m = 50, int p = 200,
                           double q = 2.0) {
    if (!(n >= 1 && n < m && p >= m) || !(q > 0))
        throw ConfigError("sqz: requires 1 <= n < m <= p and q > 0");
    const auto fast = sma(series, n);
    const auto mid = sma(series, m);
    const auto slow = sma(series, p);
    auto col = detail::blank("sqz_" + std::to_string(n) + "_" + std::to_string(m) + "_" +
                                 std::to_string(p) + "_" + detail::fmt_real_param(q),
                             series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (!fast.defined(i) || !mid.defined(i) || !slow.defined(i)) continue;
        if (slow.values[i] == 0.0) continue;
        col.values[i] = (fast.values[i] - mid.values[i]) / (slow.values[i] * q);
    }
    return col;
}

// ---------------------------------------------------------------------------
// Volatility indicators
// ---------------------------------------------------------------------------

/// Bollinger bands over the population standard deviation of the window.
/// Returns BBL, BBM, BBU, band width BBB (undefined when BBM is 0), and band
/// percent BBP (0.5 on a degenerate band).
inline std::array<IndicatorColumn, 5> bollinger(const PriceSeries& series, int n = 20,
                                                double k = 2.0) {
    if (n < 2 || !(k > 0)) throw ConfigError("bollinger: requires n >= 2 and k > 0");
    const std::string suffix = "_" + std::to_string(n) + "_" + detail::fmt_real_param(k);
    auto bbl = detail::blank("bbl" + suffix, series.size());
    auto bbm = detail::blank("bbm" + suffix, series.size());
    auto bbu = detail::blank("bbu" + suffix, series.size());
    auto bbb = detail::blank("bbb" + suffix, series.size());
    auto bbp = detail::blank("bbp" + suffix, series.size());
    for (std::size_t i = static_cast<std::size_t>(n) - 1; i < series.size(); ++i) {
        double mean = 0;
        for (std::size_t t = i + 1 - n; t <= i; ++t) mean += series.close(t);
        mean /= n;
        double var = 0;
        for (std::size_t t = i + 1 - n; t <= i; ++t) {
            const double d = series.close(t) - mean;
            var += d * d;
        }
        const double sd = std::sqrt(var / n);
        bbm.values[i] = mean;
        bbl.values[i] = mean - k * sd;
        bbu.values[i] = mean + k * sd;
        if (mean != 0.0) bbb.values[i] = (bbu.values[i] - bbl.values[i]) / mean;
        const double band = bbu.values[i] - bbl.values[i];
        bbp.values[i] = band == 0.0 ? 0.5 : (series.close(i) - bbl.values[i]) / band;
    }
    return {bbl, bbm, bbu, bbb, bbp};
}

/// ATR as the simple mean of the trailing n true ranges (not Wilder-smoothed).
inline IndicatorColumn atr(const PriceSeries& series, int n = 14) {
    if (n < 1) throw ConfigError("atr: window must be >= 1");
    if (series.size() < static_cast<std::size_t>(n) + 1)
        throw ConfigError("atr: series length must be >= n + 1");
    auto col = detail::blank("atr_" + std::to_string(n), series.size());
    std::vector<double> tr(series.size(), 0.0);
    for (std::size_t i = 1; i < series.size(); ++i) {
        const double prev_close = series.close(i - 1);
        tr[i] = std::max({series.bars[i].high - series.bars[i].low,
                          std::abs(series.bars[i].high - prev_close),
                          std::abs(series.bars[i].low - prev_close)});
    }
    for (std::size_t i = static_cast<std::size_t>(n); i < series.size(); ++i) {
        double sum = 0;
        for (std::size_t t = i + 1 - n; t <= i; ++t) sum += tr[t];
        col.values[i] = sum / n;
    }
    return col;
}

// ---------------------------------------------------------------------------
// Percent-vs-moving-average transform
// ---------------------------------------------------------------------------

/// 100 * (value - baseline) / baseline, undefined where either input is
/// undefined or the baseline is zero.
inline IndicatorColumn percent_vs_ma(const IndicatorColumn& value, const IndicatorColumn& baseline) {
    if (value.values.size() != baseline.values.size())
        throw ConfigError("percent_vs_ma: columns are not aligned");
    auto col = detail::blank("pct_" + value.name + "_" + baseline.name, value.values.size());
    for (std::size_t i = 0; i < value.values.size(); ++i) {
        if (!value.defined(i) || !baseline.defined(i) || baseline.values[i] == 0.0) continue;
        col.values[i] = 100.0 * (value.values[i] - baseline.values[i]) / baseline.values[i];
    }
    return col;
}

// ---------------------------------------------------------------------------
// Indicator specs and frame assembly
// ---------------------------------------------------------------------------

enum class IndicatorKind { Sma, Ema, Ichimoku, Adx, Rsi, Macd, WilliamsR, Kdj, Sqz, Bollinger, Atr };

struct IndicatorSpec {
    IndicatorKind kind;
    std::map<std::string, double> params;  // named, defaults applied per kind

    double param(const std::string& name, double fallback) const {
        const auto it = params.find(name);
        return it == params.end() ? fallback : it->second;
    }
    int iparam(const std::string& name, int fallback) const {
        return static_cast<int>(param(name, fallback));
    }
};

inline std::vector<IndicatorColumn> compute_indicator(const PriceSeries& series,
                                                      const IndicatorSpec& spec) {
    switch (spec.kind) {
        case IndicatorKind::Sma:
            return {sma(series, spec.iparam("n", 20))};
        case IndicatorKind::Ema:
            return {ema(series, spec.iparam("n", 20))};
        case IndicatorKind::Ichimoku: {
            auto cols = ichimoku(series, spec.iparam("n", 9), spec.iparam("m", 26),
                                 spec.iparam("p", 52));
            return {cols.begin(), cols.end()};
        }
        case IndicatorKind::Adx:
            return {adx(series, spec.iparam("n", 14))};
        case IndicatorKind::Rsi:
            return {rsi(series, spec.iparam("n", 14))};
        case IndicatorKind::Macd: {
            auto cols = macd(series, spec.iparam("n", 12), spec.iparam("m", 26), spec.iparam("p", 9));
            return {cols.begin(), cols.end()};
        }
        case IndicatorKind::WilliamsR:
            return {williams_r(series, spec.iparam("n", 14))};
        case IndicatorKind::Kdj: {
            auto cols = kdj(series, spec.iparam("n", 14), spec.iparam("d", 3));
            return {cols.begin(), cols.end()};
        }
        case IndicatorKind::Sqz:
            return {sqz(series, spec.iparam("n", 20), spec.iparam("m", 50), spec.iparam("p", 200),
                        spec.param("q", 2.0))};
        case IndicatorKind::Bollinger: {
            auto cols = bollinger(series, spec.iparam("n", 20), spec.param("k", 2.0));
            return {cols.begin(), cols.end()};
        }
        case IndicatorKind::Atr:
            return {atr(series, spec.iparam("n", 14))};
    }
    throw ConfigError("unknown indicator kind");
}

/// A percent transform applied while assembling the frame: `value` is "close"
/// or an indicator column name; `baseline` is an indicator column name.
struct PercentTransform {
    std::string value;
    std::string baseline;
};

struct TechnicalConfig {
    std::vector<IndicatorSpec> specs;
    std::vector<PercentTransform> transforms;
    bool keep_close = true;
};

/// The paper's full indicator set with its stated parameterizations, with the
/// close expressed as a percentage of SMA(20), SMA(55) and EMA(200).
inline TechnicalConfig default_technical_config() {
    TechnicalConfig cfg;
    cfg.specs = {
        {IndicatorKind::Sma, {{"n", 20}}},
        {IndicatorKind::Sma, {{"n", 55}}},
        {IndicatorKind::Ema, {{"n", 20}}},
        {IndicatorKind::Ema, {{"n", 55}}},
        {IndicatorKind::Ema, {{"n", 200}}},
        {IndicatorKind::Ichimoku, {{"n", 9}, {"m", 26}, {"p", 52}}},
        {IndicatorKind::Adx, {{"n", 14}}},
        {IndicatorKind::Rsi, {{"n", 6}}},
        {IndicatorKind::Rsi, {{"n", 12}}},
        {IndicatorKind::Rsi, {{"n", 14}}},
        {IndicatorKind::Rsi, {{"n", 24}}},
        {IndicatorKind::Macd, {{"n", 12}, {"m", 26}, {"p", 9}}},
        {IndicatorKind::WilliamsR, {{"n", 14}}},
        {IndicatorKind::Kdj, {{"n", 14}, {"d", 3}}},
        {IndicatorKind::Sqz, {{"n", 20}, {"m", 50}, {"p", 200}, {"q", 2}}},
        {IndicatorKind::Bollinger, {{"n", 20}, {"k", 2}}},
        {IndicatorKind::Atr, {{"n", 14}}},
    };
    cfg.transforms = {
        {"close", "sma_20"},
        {"close", "sma_55"},
        {"close", "ema_200"},
    };
    return cfg;
}

/// A small fast set for desk-scale experiments and tests.
inline TechnicalConfig compact_technical_config() {
    TechnicalConfig cfg;
    cfg.specs = {
        {IndicatorKind::Sma, {{"n", 20}}},
        {IndicatorKind::Rsi, {{"n", 14}}},
        {IndicatorKind::Macd, {{"n", 12}, {"m", 26}, {"p", 9}}},
        {IndicatorKind::WilliamsR, {{"n", 14}}},
        {IndicatorKind::Bollinger, {{"n", 20}, {"k", 2}}},
    };
    cfg.transforms = {{"close", "sma_20"}};
    return cfg;
}

/// Compute every configured column, apply the percent transforms, drop every
/// row containing an undefined value, and keep the raw close. Errors out with
/// the widest warm-up column named when nothing survives.
inline FeatureFrame build_technical_frame(const PriceSeries& series, const TechnicalConfig& cfg) {
    if (cfg.specs.empty()) throw ConfigError("technical config has no indicator specs");

    std::vector<IndicatorColumn> cols;
    IndicatorColumn close_col;
    close_col.name = "close";
    close_col.values.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) close_col.values.push_back(series.close(i));

    std::set<std::string> seen;
    for (const auto& spec : cfg.specs) {
        for (auto& col : compute_indicator(series, spec)) {
            if (!seen.insert(col.name).second)
                throw ConfigError("duplicate indicator column '" + col.name + "'");
            cols.push_back(std::move(col));
        }
    }
    const auto lookup = [&](const std::string& name) -> const IndicatorColumn& {
        if (name == "close") return close_col;
        for (const auto& c : cols)
            if (c.name == name) return c;
        throw ConfigError("percent transform references unknown column '" + name + "'");
    };
    std::vector<IndicatorColumn> transformed;
    for (const auto& t : cfg.transforms)
        transformed.push_back(percent_vs_ma(lookup(t.value), lookup(t.baseline)));
    for (auto& c : transformed) cols.push_back(std::move(c));
    if (cfg.keep_close) cols.insert(cols.begin(), close_col);

    FeatureFrame frame;
    for (const auto& c : cols) frame.columns.push_back(c.name);
    for (std::size_t i = 0; i < series.size(); ++i) {
        bool all_defined = true;
        for (const auto& c : cols) all_defined = all_defined && c.defined(i);
        if (!all_defined) continue;
        std::vector<double> row;
        row.reserve(cols.size());
        for (const auto& c : cols) row.push_back(c.values[i]);
        frame.data.push_back(std::move(row));
        frame.dates.push_back(series.bars[i].date);
        frame.positions.push_back(i);
    }
    if (frame.data.empty()) {
        std::size_t worst = 0;
        std::string worst_name = "close";
        for (const auto& c : cols) {
            const std::size_t fd = c.first_defined();
            if (fd > worst) {
                worst = fd;
                worst_name = c.name;
            }
        }
        throw DataError("all rows dropped building technical frame for '" + series.asset_id +
                        "': column '" + worst_name + "' needs " + std::to_string(worst) +
                        " warm-up bars but the series has " + std::to_string(series.size()));
    }
    return frame;
}

/// Attach the direction target to a technical frame via source positions.
inline void attach_target(FeatureFrame& frame, const PriceSeries& series, int h = 10,
                          const DirectionConfig& cfg = {}) {
    const TargetColumn labels = target(series, h, cfg);
    frame.target_horizon = h;
    frame.target.assign(frame.n_rows(), -1);
    for (std::size_t r = 0; r < frame.n_rows(); ++r)
        frame.target[r] = labels.values[frame.positions[r]];
}

}  // namespace finpred
