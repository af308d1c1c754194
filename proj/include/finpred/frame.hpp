#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "finpred/csv.hpp"
#include "finpred/dates.hpp"
#include "finpred/errors.hpp"

namespace finpred {

/// Aligned table of dated feature vectors plus an optional binary target.
/// Single-asset technical frames leave `asset_ids` empty; pooled fundamental
/// and hybrid frames carry one id per row. `positions` maps rows back to the
/// source price series and is not serialized.
struct FeatureFrame {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> data;  // row-major, row size == columns size
    std::vector<Date> dates;
    std::vector<std::string> asset_ids;
    std::vector<std::int8_t> target;  // empty until labeled; -1 marks undefined
    std::vector<std::size_t> positions;
    int target_horizon = 0;
    std::string date_column_name = "date";

    std::size_t n_rows() const { return data.size(); }
    std::size_t n_cols() const { return columns.size(); }
    bool pooled() const { return !asset_ids.empty(); }
    bool labeled() const { return !target.empty(); }

    std::string target_column_name() const {
        return "target_h" + std::to_string(target_horizon);
    }

    int find_column(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return static_cast<int>(i);
        return -1;
    }

    std::size_t col_index(const std::string& name) const {
        const int i = find_column(name);
        if (i < 0) throw DataError("frame has no column '" + name + "'");
        return static_cast<std::size_t>(i);
    }

    std::vector<double> column(const std::string& name) const {
        const std::size_t c = col_index(name);
        std::vector<double> out(n_rows());
        for (std::size_t r = 0; r < n_rows(); ++r) out[r] = data[r][c];
        return out;
    }

    /// Rows whose target is defined (0/1). No-op shape for unlabeled frames.
    FeatureFrame with_defined_target() const {
        FeatureFrame out = *this;
        if (!labeled()) return out;
        out.data.clear();
        out.dates.clear();
        out.asset_ids.clear();
        out.target.clear();
        out.positions.clear();
        for (std::size_t r = 0; r < n_rows(); ++r) {
            if (target[r] < 0) continue;
            out.data.push_back(data[r]);
            out.dates.push_back(dates[r]);
            if (pooled()) out.asset_ids.push_back(asset_ids[r]);
            out.target.push_back(target[r]);
            if (!positions.empty()) out.positions.push_back(positions[r]);
        }
        return out;
    }

    FeatureFrame without_columns(const std::vector<std::string>& names) const {
        FeatureFrame out;
        out.dates = dates;
        out.asset_ids = asset_ids;
        out.target = target;
        out.positions = positions;
        out.target_horizon = target_horizon;
        out.date_column_name = date_column_name;
        std::vector<std::size_t> keep;
        for (std::size_t c = 0; c < columns.size(); ++c) {
            bool drop = false;
            for (const auto& n : names) drop = drop || (columns[c] == n);
            if (!drop) {
                keep.push_back(c);
                out.columns.push_back(columns[c]);
            }
        }
        out.data.reserve(data.size());
        for (const auto& row : data) {
            std::vector<double> slim;
            slim.reserve(keep.size());
            for (std::size_t c : keep) slim.push_back(row[c]);
            out.data.push_back(std::move(slim));
        }
        return out;
    }
};

inline void write_frame_csv(const FeatureFrame& frame, const std::string& path) {
    std::vector<std::string> header;
    if (frame.pooled()) header.push_back("asset_id");
    header.push_back(frame.date_column_name);
    header.insert(header.end(), frame.columns.begin(), frame.columns.end());
    if (frame.labeled()) header.push_back(frame.target_column_name());

    std::vector<std::vector<std::string>> rows;
    rows.reserve(frame.n_rows());
    for (std::size_t r = 0; r < frame.n_rows(); ++r) {
        std::vector<std::string> row;
        row.reserve(header.size());
        if (frame.pooled()) row.push_back(frame.asset_ids[r]);
        row.push_back(frame.dates[r].to_string());
        for (double v : frame.data[r]) row.push_back(format_double(v));
        if (frame.labeled())
            row.push_back(frame.target[r] < 0 ? std::string() : std::to_string(int(frame.target[r])));
        rows.push_back(std::move(row));
    }
    write_csv(path, header, rows);
}

inline FeatureFrame read_frame_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    FeatureFrame frame;
    std::size_t c0 = 0;
    if (!table.header.empty() && table.header[0] == "asset_id") c0 = 1;
    if (c0 >= table.header.size()) throw DataError(path + ": frame CSV has no date column");
    frame.date_column_name = table.header[c0];
    if (frame.date_column_name != "date" && frame.date_column_name != "snapshot_date")
        throw DataError(path + ": expected 'date' or 'snapshot_date' column, got '" +
                        frame.date_column_name + "'");

    int target_col = -1;
    for (std::size_t c = c0 + 1; c < table.header.size(); ++c) {
        const std::string& name = table.header[c];
        if (name.rfind("target_h", 0) == 0) {
            target_col = static_cast<int>(c);
            frame.target_horizon = std::stoi(name.substr(8));
        } else {
            frame.columns.push_back(name);
        }
    }
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (row.size() != table.header.size())
            throw DataError(path + ": row " + std::to_string(r + 2) + " has wrong field count");
        if (c0 == 1) frame.asset_ids.push_back(row[0]);
        frame.dates.push_back(parse_date(row[c0]));
        std::vector<double> values;
        values.reserve(frame.columns.size());
        for (std::size_t c = c0 + 1; c < table.header.size(); ++c) {
            if (static_cast<int>(c) == target_col) continue;
            const auto v = try_parse_double(row[c]);
            if (!v)
                throw DataError(path + ": unparseable numeric cell at row " +
                                std::to_string(r + 2) + ", column '" + table.header[c] + "'");
            values.push_back(*v);
        }
        frame.data.push_back(std::move(values));
        if (target_col >= 0) {
            const auto t = try_parse_double(row[target_col]);
            frame.target.push_back(t ? static_cast<std::int8_t>(*t) : std::int8_t(-1));
        }
    }
    return frame;
}

}  // namespace finpred
