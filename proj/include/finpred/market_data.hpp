#pragma once

#include <array>
#include <set>
#include <string>
#include <vector>

#include "finpred/csv.hpp"
#include "finpred/series.hpp"

namespace finpred {

// ---------------------------------------------------------------------------
// Price ingestion
// ---------------------------------------------------------------------------

struct PriceIngestResult {
    PriceSeries series;
    std::size_t dropped_rows = 0;
};

/// Read a `date,open,high,low,close,volume` CSV. Rows with missing fields,
/// unparseable cells, or bars violating the OHLC invariants are dropped and
/// counted. After cleaning, dates must be strictly increasing and at least
/// one valid row must remain.
inline PriceIngestResult ingest_prices(const std::string& path, const std::string& asset_id) {
    const CsvTable table = read_csv(path);
    const std::array<std::string, 6> wanted = {"date", "open", "high", "low", "close", "volume"};
    std::array<int, 6> col{};
    for (std::size_t i = 0; i < wanted.size(); ++i) {
        col[i] = table.column(wanted[i]);
        if (col[i] < 0) throw DataError(path + ": missing mandatory column '" + wanted[i] + "'");
    }

    PriceIngestResult result;
    result.series.asset_id = asset_id;
    for (const auto& row : table.rows) {
        bool ok = true;
        PriceBar bar;
        if (static_cast<int>(row.size()) <= *std::max_element(col.begin(), col.end())) {
            ++result.dropped_rows;
            continue;
        }
        try {
            bar.date = parse_date(row[col[0]]);
        } catch (const DataError&) {
            ok = false;
        }
        const auto open = try_parse_double(row[col[1]]);
        const auto high = try_parse_double(row[col[2]]);
        const auto low = try_parse_double(row[col[3]]);
        const auto close = try_parse_double(row[col[4]]);
        const auto volume = try_parse_double(row[col[5]]);
        if (!open || !high || !low || !close || !volume) ok = false;
        if (ok) {
            bar.open = *open;
            bar.high = *high;
            bar.low = *low;
            bar.close = *close;
            bar.volume = static_cast<std::int64_t>(*volume);
            ok = bar.valid();
        }
        if (!ok) {
            ++result.dropped_rows;
            continue;
        }
        result.series.bars.push_back(bar);
    }
    if (result.series.bars.empty()) throw DataError(path + ": zero valid rows");
    result.series.check_monotone_dates();
    return result;
}

inline void write_prices_csv(const PriceSeries& series, const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(series.bars.size());
    for (const auto& b : series.bars) {
        rows.push_back({b.date.to_string(), format_double(b.open), format_double(b.high),
                        format_double(b.low), format_double(b.close), std::to_string(b.volume)});
    }
    write_csv(path, {"date", "open", "high", "low", "close", "volume"}, rows);
}

// ---------------------------------------------------------------------------
// Fundamental ingestion
// ---------------------------------------------------------------------------

/// Columns removed wholesale during preprocessing.
inline const std::vector<std::string>& dropped_fundamental_columns() {
    static const std::vector<std::string> cols = {
        "capitalization_millions",
        "float_pct_total_outstdg",
        "free_float_eur_millions",
    };
    return cols;
}

/// Canonical snake_case names for the fundamental variables. The models treat
/// them as opaque numeric columns; the list fixes the synthetic generator's
/// schema and documents the expected ingestion header.
inline const std::vector<std::string>& canonical_fundamental_columns() {
    static const std::vector<std::string> cols = {
        "div_yld_y0", "div_yld_y1", "margin_ebitda_pct_y0", "margin_ebitda_pct_y1",
        "roe_y1", "div_payout_y0", "eps_next_q_est", "eps_actual", "var_pct_eps_next_q",
        "ebit_next_q_est", "ebit_actual", "var_pct_ebit_next_q", "sales_next_q_est",
        "sales_actual", "var_pct_sales_next_q", "per_y0", "per_y1", "ev_ebitda_y0",
        "price_to_book_y0", "price_cf_y0", "fcf_ev_pct_y0", "fcf_yld_pct_y0", "peg_fy1",
        "objective_price_12m", "potential_objective_price_pct", "long_term_growth_pct",
        "net_debt_to_ebitda_y0", "market_value_eur_millions", "twelve_months_pct",
        "ytd_pct", "price_volatility_3y", "beta_3y_rel_local_idx",
    };
    return cols;
}

struct FundamentalsIngestResult {
    std::vector<FundamentalSnapshot> snapshots;
    std::size_t imputed_recommendations = 0;
    std::size_t imputed_zeros = 0;
};

/// Read an `asset_id,snapshot_date,<column...>` CSV and apply preprocessing:
/// the dead columns are removed, empty recommendation_numeric cells become 1,
/// any other empty numeric cell becomes 0. Non-empty cells that fail to parse
/// are hard errors reported with row and column.
inline FundamentalsIngestResult ingest_fundamentals(const std::string& path) {
    const CsvTable table = read_csv(path);
    const int asset_col = table.column("asset_id");
    const int date_col = table.column("snapshot_date");
    if (asset_col < 0) throw DataError(path + ": missing mandatory column 'asset_id'");
    if (date_col < 0) throw DataError(path + ": missing mandatory column 'snapshot_date'");

    const auto& dead = dropped_fundamental_columns();
    const std::set<std::string> dead_set(dead.begin(), dead.end());

    FundamentalsIngestResult result;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (row.size() != table.header.size()) {
            throw DataError(path + ": row " + std::to_string(r + 2) + " has " +
                            std::to_string(row.size()) + " fields, expected " +
                            std::to_string(table.header.size()));
        }
        FundamentalSnapshot snap;
        snap.asset_id = row[asset_col];
        snap.snapshot_date = parse_date(row[date_col]);
        if (snap.snapshot_date.d != 1 && snap.snapshot_date.d != 15) {
            throw DataError(path + ": row " + std::to_string(r + 2) +
                            ": snapshot_date must fall on the 1st or 15th, got " +
                            snap.snapshot_date.to_string());
        }
        bool saw_recommendation = false;
        for (std::size_t c = 0; c < table.header.size(); ++c) {
            const std::string& name = table.header[c];
            if (static_cast<int>(c) == asset_col || static_cast<int>(c) == date_col) continue;
            if (dead_set.count(name)) continue;
            const auto value = try_parse_double(row[c]);
            const bool is_recommendation = (name == "recommendation_numeric");
            if (is_recommendation) saw_recommendation = true;
            if (value) {
                snap.values[name] = *value;
            } else if (!row[c].empty() && row[c] != "\r") {
                throw DataError(path + ": unparseable numeric cell at row " +
                                std::to_string(r + 2) + ", column '" + name + "'");
            } else if (is_recommendation) {
                snap.values[name] = 1.0;
                ++result.imputed_recommendations;
            } else {
                snap.values[name] = 0.0;
                ++result.imputed_zeros;
            }
        }
        if (!saw_recommendation) {
            snap.values["recommendation_numeric"] = 1.0;
            ++result.imputed_recommendations;
        }
        result.snapshots.push_back(std::move(snap));
    }
    std::sort(result.snapshots.begin(), result.snapshots.end(),
              [](const FundamentalSnapshot& a, const FundamentalSnapshot& b) {
                  if (a.asset_id != b.asset_id) return a.asset_id < b.asset_id;
                  return a.snapshot_date < b.snapshot_date;
              });
    return result;
}

inline void write_fundamentals_csv(const std::vector<FundamentalSnapshot>& snapshots,
                                   const std::string& path) {
    std::set<std::string> names;
    for (const auto& s : snapshots)
        for (const auto& [k, v] : s.values) names.insert(k);
    std::vector<std::string> header = {"asset_id", "snapshot_date"};
    header.insert(header.end(), names.begin(), names.end());

    std::vector<std::vector<std::string>> rows;
    rows.reserve(snapshots.size());
    for (const auto& s : snapshots) {
        std::vector<std::string> row = {s.asset_id, s.snapshot_date.to_string()};
        for (const auto& name : names) {
            const auto it = s.values.find(name);
            row.push_back(it == s.values.end() ? std::string() : format_double(it->second));
        }
        rows.push_back(std::move(row));
    }
    write_csv(path, header, rows);
}

// ---------------------------------------------------------------------------
// Benchmark ingestion
// ---------------------------------------------------------------------------

inline BenchmarkSeries ingest_benchmark(const std::string& path, const std::string& index_id) {
    const CsvTable table = read_csv(path);
    const int date_col = table.column("date");
    const int close_col = table.column("close");
    if (date_col < 0 || close_col < 0)
        throw DataError(path + ": benchmark CSV requires 'date' and 'close' columns");
    BenchmarkSeries series;
    series.index_id = index_id;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const Date date = parse_date(row[date_col]);
        const auto close = try_parse_double(row[close_col]);
        if (!close || !(*close > 0))
            throw DataError(path + ": invalid close at row " + std::to_string(r + 2));
        series.closes.emplace_back(date, *close);
    }
    if (series.closes.empty()) throw DataError(path + ": zero valid rows");
    for (std::size_t i = 1; i < series.closes.size(); ++i) {
        if (!(series.closes[i - 1].first < series.closes[i].first))
            throw DataError(path + ": non-monotone dates");
    }
    return series;
}

inline void write_benchmark_csv(const BenchmarkSeries& series, const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(series.closes.size());
    for (const auto& [date, close] : series.closes)
        rows.push_back({date.to_string(), format_double(close)});
    write_csv(path, {"date", "close"}, rows);
}

}  // namespace finpred
