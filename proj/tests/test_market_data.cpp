#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "finpred/market_data.hpp"
#include "finpred/synthetic.hpp"

using namespace finpred;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "finpred_md_tests";
    fs::create_directories(dir);
    return dir / name;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST(IngestPrices, CleanInputKeepsAllRows) {
    const auto path = temp_file("clean.csv");
    write_text(path,
               "date,open,high,low,close,volume\n"
               "2023-01-02,10,11,9,10.5,100\n"
               "2023-01-03,10.5,12,10,11,200\n"
               "2023-01-04,11,11.5,10.5,11.2,150\n"
               "2023-01-05,11.2,11.6,11,11.4,90\n"
               "2023-01-06,11.4,12,11,11.9,80\n");
    const auto result = ingest_prices(path.string(), "AAA");
    EXPECT_EQ(result.series.size(), 5u);
    EXPECT_EQ(result.dropped_rows, 0u);
    EXPECT_EQ(result.series.asset_id, "AAA");
}

TEST(IngestPrices, MissingCloseDropsRow) {
    const auto path = temp_file("missing_close.csv");
    write_text(path,
               "date,open,high,low,close,volume\n"
               "2023-01-02,10,11,9,10.5,100\n"
               "2023-01-03,10.5,12,10,,200\n"
               "2023-01-04,11,11.5,10.5,11.2,150\n");
    const auto result = ingest_prices(path.string(), "AAA");
    EXPECT_EQ(result.series.size(), 2u);
    EXPECT_EQ(result.dropped_rows, 1u);
    EXPECT_EQ(result.series.bars[1].date.to_string(), "2023-01-04");
}

TEST(IngestPrices, DuplicateDateIsError) {
    const auto path = temp_file("dup.csv");
    write_text(path,
               "date,open,high,low,close,volume\n"
               "2023-01-02,10,11,9,10.5,100\n"
               "2023-01-02,10,11,9,10.6,100\n");
    try {
        ingest_prices(path.string(), "AAA");
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("non-monotone dates"), std::string::npos);
    }
}

TEST(IngestPrices, UnreadableFileAndZeroRows) {
    EXPECT_THROW(ingest_prices("/no/such/file.csv", "X"), DataError);
    const auto path = temp_file("all_bad.csv");
    write_text(path, "date,open,high,low,close,volume\n2023-01-02,10,9,11,10.5,100\n");
    EXPECT_THROW(ingest_prices(path.string(), "X"), DataError);
}

TEST(IngestPrices, RoundTripIsIdempotent) {
    const auto market = generate_synthetic_market({.n_assets = 1, .n_bars = 60}, 5);
    const auto path = temp_file("roundtrip.csv");
    write_prices_csv(market.prices[0], path.string());
    const auto once = ingest_prices(path.string(), market.prices[0].asset_id);
    EXPECT_EQ(once.dropped_rows, 0u);
    const auto path2 = temp_file("roundtrip2.csv");
    write_prices_csv(once.series, path2.string());
    const auto twice = ingest_prices(path2.string(), market.prices[0].asset_id);
    ASSERT_EQ(once.series.size(), twice.series.size());
    for (std::size_t i = 0; i < once.series.size(); ++i) {
        EXPECT_EQ(once.series.bars[i].close, twice.series.bars[i].close);
        EXPECT_EQ(once.series.bars[i].open, twice.series.bars[i].open);
        EXPECT_EQ(once.series.bars[i].date, twice.series.bars[i].date);
        EXPECT_EQ(once.series.bars[i].volume, twice.series.bars[i].volume);
    }
}

TEST(IngestFundamentals, RecommendationImputedToOne) {
    const auto path = temp_file("fund_rec.csv");
    write_text(path,
               "asset_id,snapshot_date,margin_ebitda_pct_y0,recommendation_numeric\n"
               "AAA,2023-02-01,12.5,\n"
               "AAA,2023-02-15,13.0,2.5\n");
    const auto result = ingest_fundamentals(path.string());
    ASSERT_EQ(result.snapshots.size(), 2u);
    EXPECT_EQ(result.snapshots[0].values.at("recommendation_numeric"), 1.0);
    EXPECT_EQ(result.snapshots[1].values.at("recommendation_numeric"), 2.5);
    EXPECT_EQ(result.imputed_recommendations, 1u);
}

TEST(IngestFundamentals, OtherMissingBecomesZero) {
    const auto path = temp_file("fund_zero.csv");
    write_text(path,
               "asset_id,snapshot_date,margin_ebitda_pct_y0,per_y0\n"
               "AAA,2023-02-01,,18\n");
    const auto result = ingest_fundamentals(path.string());
    EXPECT_EQ(result.snapshots[0].values.at("margin_ebitda_pct_y0"), 0.0);
    EXPECT_EQ(result.imputed_zeros, 1u);
}

TEST(IngestFundamentals, DeadColumnsDropped) {
    const auto path = temp_file("fund_dead.csv");
    write_text(path,
               "asset_id,snapshot_date,float_pct_total_outstdg,per_y0\n"
               "AAA,2023-02-01,44,18\n");
    const auto result = ingest_fundamentals(path.string());
    EXPECT_EQ(result.snapshots[0].values.count("float_pct_total_outstdg"), 0u);
    EXPECT_EQ(result.snapshots[0].values.at("per_y0"), 18.0);
}

TEST(IngestFundamentals, NoMissingValuesSurvivePreprocessing) {
    const auto market = generate_synthetic_market({.n_assets = 3, .n_bars = 120}, 9);
    const auto path = temp_file("fund_scan.csv");
    write_fundamentals_csv(market.fundamentals, path.string());
    const auto result = ingest_fundamentals(path.string());
    ASSERT_FALSE(result.snapshots.empty());
    for (const auto& snap : result.snapshots) {
        for (const auto& [name, value] : snap.values) {
            EXPECT_TRUE(std::isfinite(value)) << name;
        }
        EXPECT_TRUE(snap.values.count("recommendation_numeric"));
    }
}

TEST(IngestFundamentals, ErrorsNameRowAndColumn) {
    const auto path = temp_file("fund_bad.csv");
    write_text(path,
               "asset_id,snapshot_date,per_y0\n"
               "AAA,2023-02-01,not_a_number\n");
    try {
        ingest_fundamentals(path.string());
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("row 2"), std::string::npos);
        EXPECT_NE(msg.find("per_y0"), std::string::npos);
    }
    const auto path2 = temp_file("fund_nocol.csv");
    write_text(path2, "asset_id,margin\nAAA,3\n");
    EXPECT_THROW(ingest_fundamentals(path2.string()), DataError);
}

TEST(Synthetic, DeterministicForFixedSeed) {
    const SyntheticConfig cfg{.n_assets = 2, .n_bars = 100};
    const auto a = generate_synthetic_market(cfg, 7);
    const auto b = generate_synthetic_market(cfg, 7);
    ASSERT_EQ(a.prices.size(), b.prices.size());
    for (std::size_t i = 0; i < a.prices.size(); ++i) {
        ASSERT_EQ(a.prices[i].size(), b.prices[i].size());
        for (std::size_t t = 0; t < a.prices[i].size(); ++t) {
            EXPECT_EQ(a.prices[i].bars[t].close, b.prices[i].bars[t].close);
            EXPECT_EQ(a.prices[i].bars[t].volume, b.prices[i].bars[t].volume);
        }
    }
    ASSERT_EQ(a.fundamentals.size(), b.fundamentals.size());
    for (std::size_t i = 0; i < a.fundamentals.size(); ++i)
        EXPECT_EQ(a.fundamentals[i].values, b.fundamentals[i].values);
    ASSERT_EQ(a.benchmarks.size(), b.benchmarks.size());
    for (std::size_t i = 0; i < a.benchmarks.size(); ++i)
        EXPECT_EQ(a.benchmarks[i].closes, b.benchmarks[i].closes);
}

TEST(Synthetic, ZeroSignalReturnsAreWhiteNoise) {
    const auto market =
        generate_synthetic_market({.n_assets = 1, .n_bars = 1000, .signal_strength = 0.0}, 3);
    const auto& bars = market.prices[0].bars;
    std::vector<double> returns;
    for (std::size_t i = 1; i < bars.size(); ++i)
        returns.push_back(std::log(bars[i].close / bars[i - 1].close));
    double mean = 0;
    for (double r : returns) mean += r;
    mean /= static_cast<double>(returns.size());
    double num = 0, den = 0;
    for (std::size_t i = 1; i < returns.size(); ++i)
        num += (returns[i] - mean) * (returns[i - 1] - mean);
    for (double r : returns) den += (r - mean) * (r - mean);
    const double lag1 = num / den;
    EXPECT_NEAR(lag1, 0.0, 0.1);
}

TEST(Synthetic, FullSignalIsSignPredictable) {
    const auto market =
        generate_synthetic_market({.n_assets = 1, .n_bars = 1000, .signal_strength = 1.0}, 3);
    const auto& bars = market.prices[0].bars;
    std::size_t hits = 0, total = 0;
    double prev = 0;
    for (std::size_t i = 1; i < bars.size(); ++i) {
        const double r = std::log(bars[i].close / bars[i - 1].close);
        if (i > 1) {
            ++total;
            if ((r > 0) == (prev > 0)) ++hits;
        }
        prev = r;
    }
    const double accuracy = static_cast<double>(hits) / static_cast<double>(total);
    EXPECT_GT(accuracy, 0.9);
}

TEST(Synthetic, InvalidConfigRejected) {
    EXPECT_THROW(generate_synthetic_market({.n_assets = 0}, 1), ConfigError);
    EXPECT_THROW(generate_synthetic_market({.n_bars = -5}, 1), ConfigError);
    EXPECT_THROW(generate_synthetic_market({.signal_strength = 1.5}, 1), ConfigError);
}

TEST(Synthetic, BarsSatisfyInvariants) {
    const auto market = generate_synthetic_market({.n_assets = 3, .n_bars = 300}, 11);
    for (const auto& series : market.prices) {
        series.check_monotone_dates();
        for (const auto& bar : series.bars) EXPECT_TRUE(bar.valid());
    }
}
