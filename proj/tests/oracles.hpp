// Independent brute-force oracles. Everything here is written directly from
// the formulas, with no shared code path into the library implementations it
// checks: plain loops, no running sums, no shared helpers.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "finpred/rng.hpp"
#include "finpred/series.hpp"

namespace oracle {

inline constexpr double NA = std::numeric_limits<double>::quiet_NaN();

using finpred::PriceSeries;

inline std::vector<double> closes_of(const PriceSeries& s) {
    std::vector<double> c;
    for (const auto& b : s.bars) c.push_back(b.close);
    return c;
}

// --- moving averages -------------------------------------------------------

inline std::vector<double> sma(const std::vector<double>& x, int n) {
    std::vector<double> out(x.size(), NA);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i + 1 < static_cast<std::size_t>(n)) continue;
        double s = 0;
        for (std::size_t k = i + 1 - n; k <= i; ++k) s += x[k];
        out[i] = s / n;
    }
    return out;
}

inline std::vector<double> ema(const std::vector<double>& x, int n) {
    std::vector<double> out(x.size(), NA);
    if (x.size() < static_cast<std::size_t>(n)) return out;
    double s = 0;
    for (int i = 0; i < n; ++i) s += x[i];
    out[n - 1] = s / n;
    for (std::size_t i = n; i < x.size(); ++i)
        out[i] = out[i - 1] + 2.0 / (n + 1) * (x[i] - out[i - 1]);
    return out;
}

// EMA over a column that starts with NA warm-up (for the MACD signal line).
inline std::vector<double> ema_skipna(const std::vector<double>& x, int n) {
    std::vector<double> out(x.size(), NA);
    std::size_t start = 0;
    while (start < x.size() && std::isnan(x[start])) ++start;
    if (start + n > x.size()) return out;
    double s = 0;
    for (std::size_t i = start; i < start + n; ++i) s += x[i];
    out[start + n - 1] = s / n;
    for (std::size_t i = start + n; i < x.size(); ++i)
        out[i] = out[i - 1] + 2.0 / (n + 1) * (x[i] - out[i - 1]);
    return out;
}

// --- full indicator set ----------------------------------------------------

struct Ichimoku {
    std::vector<double> its, iks, isa, isb, cs;
};

inline Ichimoku ichimoku(const PriceSeries& s, int n, int m, int p) {
    const std::size_t len = s.size();
    Ichimoku o{std::vector<double>(len, NA), std::vector<double>(len, NA),
               std::vector<double>(len, NA), std::vector<double>(len, NA),
               std::vector<double>(len, NA)};
    auto mid = [&](std::size_t i, int w) {
        double hi = -1e300, lo = 1e300;
        for (std::size_t k = i + 1 - w; k <= i; ++k) {
            hi = std::max(hi, s.bars[k].high);
            lo = std::min(lo, s.bars[k].low);
        }
        return (hi + lo) / 2;
    };
    for (std::size_t i = 0; i < len; ++i) {
        if (i + 1 >= static_cast<std::size_t>(n)) o.its[i] = mid(i, n);
        if (i + 1 >= static_cast<std::size_t>(m)) o.iks[i] = mid(i, m);
    }
    std::vector<double> isa_raw(len, NA), isb_raw(len, NA);
    for (std::size_t i = 0; i < len; ++i) {
        if (!std::isnan(o.its[i]) && !std::isnan(o.iks[i])) isa_raw[i] = (o.its[i] + o.iks[i]) / 2;
        if (i + 1 >= static_cast<std::size_t>(p)) isb_raw[i] = mid(i, p);
    }
    const int shift = p / 2;
    for (std::size_t i = 0; i < len; ++i) {
        if (i >= static_cast<std::size_t>(shift)) {
            o.isa[i] = isa_raw[i - shift];
            o.isb[i] = isb_raw[i - shift];
        }
        if (i + m < len) o.cs[i] = s.bars[i + m].close;
    }
    return o;
}

inline std::vector<double> adx(const PriceSeries& s, int n) {
    std::vector<double> out(s.size(), NA);
    double prev = 0;
    for (std::size_t t = 1; t < s.size(); ++t) {
        const double dip = s.bars[t].high - s.bars[t - 1].high;
        const double dim = s.bars[t - 1].low - s.bars[t].low;
        double dx = 0;
        if (std::abs(dip + dim) != 0) dx = std::abs(dip - dim) / std::abs(dip + dim);
        prev = (t == 1) ? dx : (prev * (n - 1) + dx) / n;
        out[t] = prev;
    }
    return out;
}

inline std::vector<double> rsi(const std::vector<double>& close, int n) {
    std::vector<double> out(close.size(), NA);
    for (std::size_t i = n; i < close.size(); ++i) {
        double g = 0, l = 0;
        for (std::size_t t = i + 1 - n; t <= i; ++t) {
            const double d = close[t] - close[t - 1];
            if (d > 0) g += d;
            if (d < 0) l += -d;
        }
        g /= n;
        l /= n;
        if (l == 0)
            out[i] = g == 0 ? 50.0 : 100.0;
        else
            out[i] = 100.0 - 100.0 / (1.0 + g / l);
    }
    return out;
}

struct Macd {
    std::vector<double> line, signal, hist;
};

inline Macd macd(const std::vector<double>& close, int n, int m, int p) {
    Macd o;
    const auto fast = ema(close, n);
    const auto slow = ema(close, m);
    o.line.assign(close.size(), NA);
    for (std::size_t i = 0; i < close.size(); ++i)
        if (!std::isnan(fast[i]) && !std::isnan(slow[i])) o.line[i] = fast[i] - slow[i];
    o.signal = ema_skipna(o.line, p);
    o.hist.assign(close.size(), NA);
    for (std::size_t i = 0; i < close.size(); ++i)
        if (!std::isnan(o.line[i]) && !std::isnan(o.signal[i]))
            o.hist[i] = o.line[i] - o.signal[i];
    return o;
}

inline std::vector<double> williams(const PriceSeries& s, int n) {
    std::vector<double> out(s.size(), NA);
    for (std::size_t i = n - 1; i < s.size(); ++i) {
        double hi = -1e300, lo = 1e300;
        for (std::size_t k = i + 1 - n; k <= i; ++k) {
            hi = std::max(hi, s.bars[k].high);
            lo = std::min(lo, s.bars[k].low);
        }
        out[i] = hi == lo ? 0.0 : (hi - s.bars[i].close) / (hi - lo) * 100.0;
    }
    return out;
}

struct Kdj {
    std::vector<double> k, d, j;
};

inline Kdj kdj(const PriceSeries& s, int n, int dwin) {
    Kdj o;
    o.k.assign(s.size(), NA);
    o.d.assign(s.size(), NA);
    o.j.assign(s.size(), NA);
    for (std::size_t i = n - 1; i < s.size(); ++i) {
        double hi = -1e300, lo = 1e300;
        for (std::size_t t = i + 1 - n; t <= i; ++t) {
            hi = std::max(hi, s.bars[t].high);
            lo = std::min(lo, s.bars[t].low);
        }
        o.k[i] = hi == lo ? 50.0 : 100.0 * (s.bars[i].close - lo) / (hi - lo);
    }
    for (std::size_t i = n - 1 + dwin - 1; i < s.size(); ++i) {
        double sum = 0;
        for (std::size_t t = i + 1 - dwin; t <= i; ++t) sum += o.k[t];
        o.d[i] = sum / dwin;
        o.j[i] = 3 * o.k[i] - 2 * o.d[i];
    }
    return o;
}

inline std::vector<double> sqz(const std::vector<double>& close, int n, int m, int p, double q) {
    const auto a = sma(close, n);
    const auto b = sma(close, m);
    const auto c = sma(close, p);
    std::vector<double> out(close.size(), NA);
    for (std::size_t i = 0; i < close.size(); ++i) {
        if (std::isnan(a[i]) || std::isnan(b[i]) || std::isnan(c[i]) || c[i] == 0) continue;
        out[i] = (a[i] - b[i]) / (c[i] * q);
    }
    return out;
}

struct Bollinger {
    std::vector<double> bbl, bbm, bbu, bbb, bbp;
};

inline Bollinger bollinger(const std::vector<double>& close, int n, double k) {
    Bollinger o;
    const std::size_t len = close.size();
    o.bbl.assign(len, NA);
    o.bbm.assign(len, NA);
    o.bbu.assign(len, NA);
    o.bbb.assign(len, NA);
    o.bbp.assign(len, NA);
    for (std::size_t i = n - 1; i < len; ++i) {
        double mean = 0;
        for (std::size_t t = i + 1 - n; t <= i; ++t) mean += close[t];
        mean /= n;
        double var = 0;
        for (std::size_t t = i + 1 - n; t <= i; ++t) var += (close[t] - mean) * (close[t] - mean);
        const double sd = std::sqrt(var / n);
        o.bbm[i] = mean;
        o.bbl[i] = mean - k * sd;
        o.bbu[i] = mean + k * sd;
        if (mean != 0) o.bbb[i] = (o.bbu[i] - o.bbl[i]) / mean;
        o.bbp[i] = (o.bbu[i] - o.bbl[i]) == 0 ? 0.5 : (close[i] - o.bbl[i]) / (o.bbu[i] - o.bbl[i]);
    }
    return o;
}

inline std::vector<double> atr(const PriceSeries& s, int n) {
    std::vector<double> out(s.size(), NA);
    for (std::size_t i = n; i < s.size(); ++i) {
        double sum = 0;
        for (std::size_t t = i + 1 - n; t <= i; ++t) {
            const double tr = std::max({s.bars[t].high - s.bars[t].low,
                                        std::abs(s.bars[t].high - s.bars[t - 1].close),
                                        std::abs(s.bars[t].low - s.bars[t - 1].close)});
            sum += tr;
        }
        out[i] = sum / n;
    }
    return out;
}

// --- labeling --------------------------------------------------------------

inline double relative_direction(const std::vector<double>& close, std::size_t n, std::size_t h) {
    double mx = -1e300, mn = 1e300;
    for (std::size_t i = n + 1; i <= n + h; ++i) {
        mx = std::max(mx, close[i]);
        mn = std::min(mn, close[i]);
    }
    return (mx - close[n]) / 2 + (mn - close[n]) / 2 + (close[n + h] - close[n]) / 2;
}

inline int target_at(const std::vector<double>& close, std::size_t n, std::size_t h) {
    return relative_direction(close, n, h) - close[n] > 0 ? 1 : 0;
}

// --- metrics ---------------------------------------------------------------

// Pairwise Mann-Whitney statistic, ties counted 1/2.
inline double pairwise_auc(const std::vector<double>& scores,
                           const std::vector<std::int8_t>& labels) {
    double wins = 0;
    std::size_t n_pos = 0, n_neg = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] <= 0) continue;
        ++n_pos;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] > 0) continue;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    for (auto y : labels) n_neg += (y <= 0);
    return wins / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

// --- random test series ----------------------------------------------------

inline PriceSeries random_series(std::uint64_t seed, std::size_t bars, double vol = 0.02) {
    finpred::Rng rng(seed);
    PriceSeries s;
    s.asset_id = "RND";
    finpred::Date d{2019, 1, 7};
    double logp = std::log(100.0);
    for (std::size_t i = 0; i < bars; ++i) {
        logp += vol * rng.normal();
        finpred::PriceBar b;
        b.date = d;
        b.close = std::exp(logp);
        b.open = b.close * std::exp(0.3 * vol * rng.normal());
        b.high = std::max(b.open, b.close) * std::exp(std::abs(0.5 * vol * rng.normal()));
        b.low = std::min(b.open, b.close) * std::exp(-std::abs(0.5 * vol * rng.normal()));
        b.volume = 1000 + static_cast<std::int64_t>(rng.uniform_int(0, 100000));
        s.bars.push_back(b);
        d = d.next_weekday();
    }
    return s;
}

}  // namespace oracle
