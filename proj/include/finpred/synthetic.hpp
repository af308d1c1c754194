#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "finpred/labeling.hpp"
#include "finpred/market_data.hpp"
#include "finpred/rng.hpp"
#include "finpred/series.hpp"

namespace finpred {

/// Synthetic market spec. Signal assets draw returns from a persistent AR(1)
/// momentum process mixed with white noise at `signal_strength`; the rest are
/// pure noise. Daily volatility is deliberately large so the direction label
/// has mass in both classes at the default horizon.
struct SyntheticConfig {
    int n_assets = 10;
    int n_bars = 500;
    double signal_strength = 0.5;    // in [0,1]; 0 = white noise returns
    double signal_fraction = 1.0;    // leading fraction of assets that carry the signal
    double fundamental_strength = 0.3;  // in [0,1]; label correlation of planted columns
    double daily_vol = 0.12;
    double momentum_phi = 0.98;
    double base_price = 100.0;
    int horizon = 10;
    Date start_date{2020, 1, 6};
    std::vector<std::string> benchmark_ids = {"SP500", "NASDAQ", "EUROSTOXX50"};
};

struct SyntheticMarket {
    std::vector<PriceSeries> prices;
    std::vector<FundamentalSnapshot> fundamentals;
    std::vector<BenchmarkSeries> benchmarks;
    std::vector<std::string> signal_assets;
};

namespace detail {

inline std::vector<Date> trading_calendar(Date start, int n_days) {
    std::vector<Date> days;
    days.reserve(static_cast<std::size_t>(n_days));
    Date d = start.is_weekday() ? start : start.next_weekday();
    for (int i = 0; i < n_days; ++i) {
        days.push_back(d);
        d = d.next_weekday();
    }
    return days;
}

inline PriceSeries synthetic_series(const std::string& asset_id, const std::vector<Date>& calendar,
                                    double strength, const SyntheticConfig& cfg, Rng& rng) {
    PriceSeries series;
    series.asset_id = asset_id;
    series.bars.reserve(calendar.size());

    const double vol = cfg.daily_vol;
    const double phi = cfg.momentum_phi;
    double momentum = rng.normal(0.0, vol);
    double log_price = std::log(cfg.base_price) + rng.normal(0.0, 0.05);
    double prev_close = std::exp(log_price);

    for (std::size_t t = 0; t < calendar.size(); ++t) {
        if (t > 0) {
            momentum = phi * momentum + std::sqrt(1.0 - phi * phi) * vol * rng.normal();
            const double noise = vol * rng.normal();
            log_price += strength * momentum + (1.0 - strength) * noise;
        }
        PriceBar bar;
        bar.date = calendar[t];
        bar.close = std::exp(log_price);
        bar.open = (t == 0) ? bar.close * std::exp(0.1 * vol * rng.normal())
                            : prev_close * std::exp(0.1 * vol * rng.normal());
        bar.high = std::max(bar.open, bar.close) * std::exp(std::abs(0.3 * vol * rng.normal()));
        bar.low = std::min(bar.open, bar.close) * std::exp(-std::abs(0.3 * vol * rng.normal()));
        bar.volume = static_cast<std::int64_t>(std::llround(std::exp(rng.normal(12.0, 0.5))));
        prev_close = bar.close;
        series.bars.push_back(bar);
    }
    return series;
}

/// Snapshot dates: every 1st and 15th falling inside the calendar span.
inline std::vector<Date> snapshot_dates(const std::vector<Date>& calendar) {
    std::vector<Date> out;
    const Date first = calendar.front();
    const Date last = calendar.back();
    int y = first.y, m = first.m;
    while (Date{y, m, 1} <= last) {
        for (int day : {1, 15}) {
            const Date d{y, m, day};
            if (first <= d && d <= last) out.push_back(d);
        }
        if (++m > 12) {
            m = 1;
            ++y;
        }
    }
    return out;
}

}  // namespace detail

/// Deterministic for a fixed (config, seed) pair: every asset, column, and
/// benchmark draws from its own derived stream.
inline SyntheticMarket generate_synthetic_market(const SyntheticConfig& cfg, std::uint64_t seed) {
    if (cfg.n_assets <= 0) throw ConfigError("n_assets must be positive");
    if (cfg.n_bars <= 0) throw ConfigError("n_bars must be positive");
    if (cfg.signal_strength < 0 || cfg.signal_strength > 1)
        throw ConfigError("signal_strength must lie in [0,1]");
    if (cfg.signal_fraction < 0 || cfg.signal_fraction > 1)
        throw ConfigError("signal_fraction must lie in [0,1]");
    if (cfg.fundamental_strength < 0 || cfg.fundamental_strength > 1)
        throw ConfigError("fundamental_strength must lie in [0,1]");

    SyntheticMarket market;
    const std::vector<Date> calendar = detail::trading_calendar(cfg.start_date, cfg.n_bars);
    const int n_signal =
        static_cast<int>(std::ceil(cfg.signal_fraction * static_cast<double>(cfg.n_assets)));

    // Per-column signal loadings, shared across assets.
    const auto& columns = canonical_fundamental_columns();
    std::vector<double> loading(columns.size(), 0.0);
    {
        Rng col_rng(derive_seed(seed, "synthetic-fundamental-columns"));
        for (std::size_t j = 0; j < columns.size(); ++j) {
            const bool informative = col_rng.uniform() < 0.5;
            const double magnitude = col_rng.uniform(0.3, 1.0);
            loading[j] = informative ? magnitude : 0.0;
        }
    }

    const std::vector<Date> snaps = detail::snapshot_dates(calendar);
    const double q = cfg.fundamental_strength;

    for (int a = 0; a < cfg.n_assets; ++a) {
        char id[16];
        std::snprintf(id, sizeof(id), "SYN%03d", a);
        const std::string asset_id(id);
        const bool has_signal = a < n_signal;
        const double strength = has_signal ? cfg.signal_strength : 0.0;
        if (has_signal && cfg.signal_strength > 0) market.signal_assets.push_back(asset_id);

        Rng rng(derive_seed(seed, "synthetic-asset:" + asset_id));
        PriceSeries series = detail::synthetic_series(asset_id, calendar, strength, cfg, rng);

        TargetColumn labels;
        if (series.size() > static_cast<std::size_t>(cfg.horizon))
            labels = target(series, cfg.horizon);

        Rng fund_rng(derive_seed(seed, "synthetic-fundamentals:" + asset_id));
        for (const Date& snap_date : snaps) {
            const int pos = series.position_at_or_before(snap_date);
            double g = 0.0;
            if (pos >= 0 && !labels.values.empty() && labels.defined(static_cast<std::size_t>(pos)))
                g = labels.values[static_cast<std::size_t>(pos)] == 1 ? 1.0 : -1.0;
            FundamentalSnapshot snap;
            snap.asset_id = asset_id;
            snap.snapshot_date = snap_date;
            for (std::size_t j = 0; j < columns.size(); ++j) {
                const double z = fund_rng.normal();
                snap.values[columns[j]] = q * loading[j] * g + (1.0 - q) * z;
            }
            const double rec = 3.0 - 2.0 * q * g + (1.0 - q) * fund_rng.normal();
            snap.values["recommendation_numeric"] = std::min(5.0, std::max(1.0, rec));
            market.fundamentals.push_back(std::move(snap));
        }
        market.prices.push_back(std::move(series));
    }

    for (const auto& index_id : cfg.benchmark_ids) {
        Rng rng(derive_seed(seed, "synthetic-benchmark:" + index_id));
        BenchmarkSeries bench;
        bench.index_id = index_id;
        double log_level = std::log(1000.0) + rng.normal(0.0, 0.1);
        for (const Date& d : calendar) {
            log_level += 0.0002 + 0.01 * rng.normal();
            bench.closes.emplace_back(d, std::exp(log_level));
        }
        market.benchmarks.push_back(std::move(bench));
    }
    return market;
}

}  // namespace finpred
