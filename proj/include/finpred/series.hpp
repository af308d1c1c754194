#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "finpred/dates.hpp"
#include "finpred/errors.hpp"

namespace finpred {

struct PriceBar {
    Date date;
    double open = 0;
    double high = 0;
    double low = 0;
    double close = 0;
    std::int64_t volume = 0;

    bool valid() const {
        if (!(open > 0 && high > 0 && low > 0 && close > 0)) return false;
        if (volume < 0) return false;
        if (high < low) return false;
        if (low > std::min(open, close)) return false;
        if (high < std::max(open, close)) return false;
        return true;
    }
};

/// Dated OHLCV bars for one asset; dates strictly increasing.
struct PriceSeries {
    std::string asset_id;
    std::vector<PriceBar> bars;

    std::size_t size() const { return bars.size(); }
    double close(std::size_t i) const { return bars[i].close; }

    /// Index of the bar at `date`, or -1.
    int position_of(Date date) const {
        const auto it = std::lower_bound(bars.begin(), bars.end(), date,
                                         [](const PriceBar& b, Date d) { return b.date < d; });
        if (it == bars.end() || !(it->date == date)) return -1;
        return static_cast<int>(it - bars.begin());
    }

    /// Index of the most recent bar dated <= `date`, or -1 if none.
    int position_at_or_before(Date date) const {
        const auto it = std::upper_bound(bars.begin(), bars.end(), date,
                                         [](Date d, const PriceBar& b) { return d < b.date; });
        if (it == bars.begin()) return -1;
        return static_cast<int>(it - bars.begin()) - 1;
    }

    void check_monotone_dates() const {
        for (std::size_t i = 1; i < bars.size(); ++i) {
            if (!(bars[i - 1].date < bars[i].date)) {
                throw DataError("non-monotone dates in series '" + asset_id + "' at " +
                                bars[i].date.to_string());
            }
        }
    }
};

/// Preprocessed fundamental snapshot: named numeric columns with no missing
/// values (recommendation_numeric imputed to 1, everything else to 0).
struct FundamentalSnapshot {
    std::string asset_id;
    Date snapshot_date;
    std::map<std::string, double> values;
};

struct BenchmarkSeries {
    std::string index_id;
    std::vector<std::pair<Date, double>> closes;

    int position_at_or_before(Date date) const {
        const auto it = std::upper_bound(
            closes.begin(), closes.end(), date,
            [](Date d, const std::pair<Date, double>& p) { return d < p.first; });
        if (it == closes.begin()) return -1;
        return static_cast<int>(it - closes.begin()) - 1;
    }
};

}  // namespace finpred
