#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "finpred/errors.hpp"
#include "finpred/series.hpp"

namespace finpred {

/// Weights of the three fluctuation terms in the relative direction. The
/// printed coefficients are all 1/2; `thirds()` gives the equal-importance
/// alternative reading.
struct DirectionConfig {
    double w_max = 0.5;
    double w_min = 0.5;
    double w_close = 0.5;
    bool include_current_bar = false;  // window n+1..n+h by default

    static DirectionConfig thirds() { return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, false}; }
};

/// Relative direction at position n for horizon h: the weighted sum of the
/// max, min, and terminal close fluctuations against the current close.
inline double relative_direction(const PriceSeries& series, std::size_t n, std::size_t h,
                                 const DirectionConfig& cfg = {}) {
    if (h < 1) throw ConfigError("horizon must be >= 1");
    if (n + h + 1 > series.size()) throw DataError("horizon overruns series end");
    const double p_n = series.close(n);
    const std::size_t first = cfg.include_current_bar ? n : n + 1;
    double max_p = series.close(first);
    double min_p = series.close(first);
    for (std::size_t i = first; i <= n + h; ++i) {
        max_p = std::max(max_p, series.close(i));
        min_p = std::min(min_p, series.close(i));
    }
    const double p_nh = series.close(n + h);
    return cfg.w_max * (max_p - p_n) + cfg.w_min * (min_p - p_n) + cfg.w_close * (p_nh - p_n);
}

/// Binary direction labels aligned to price positions; the last h positions
/// are undefined (-1).
struct TargetColumn {
    int horizon = 10;
    std::vector<std::int8_t> values;  // 0, 1, or -1 for undefined

    bool defined(std::size_t i) const { return values[i] >= 0; }
};

/// Label = 1 where relative_direction(n, h) - P(n) > 0, else 0. Ties go to 0.
inline TargetColumn target(const PriceSeries& series, int h = 10,
                           const DirectionConfig& cfg = {}) {
    if (h < 1) throw ConfigError("horizon must be >= 1");
    if (series.size() <= static_cast<std::size_t>(h))
        throw DataError("series length " + std::to_string(series.size()) +
                        " <= horizon " + std::to_string(h));
    TargetColumn column;
    column.horizon = h;
    column.values.assign(series.size(), -1);
    const std::size_t last = series.size() - 1 - static_cast<std::size_t>(h);
    for (std::size_t n = 0; n <= last; ++n) {
        const double direct = relative_direction(series, n, static_cast<std::size_t>(h), cfg);
        column.values[n] = (direct - series.close(n) > 0) ? 1 : 0;
    }
    return column;
}

}  // namespace finpred
