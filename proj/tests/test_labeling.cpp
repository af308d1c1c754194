#include <gtest/gtest.h>

#include "finpred/labeling.hpp"
#include "oracles.hpp"

using namespace finpred;

namespace {

PriceSeries from_closes(const std::vector<double>& closes) {
    PriceSeries s;
    s.asset_id = "T";
    Date d{2023, 1, 2};
    for (double c : closes) {
        s.bars.push_back({d, c, c, c, c, 100});
        d = d.next_weekday();
    }
    return s;
}

}  // namespace

TEST(RelativeDirection, ConstantSeriesGivesZeroAndTargetZero) {
    const auto s = from_closes(std::vector<double>(20, 7.0));
    EXPECT_DOUBLE_EQ(relative_direction(s, 0, 10), 0.0);
    const auto t = target(s, 10);
    for (std::size_t n = 0; n + 10 < s.size(); ++n) EXPECT_EQ(t.values[n], 0);
}

TEST(RelativeDirection, HandSubstitutionFlatWindowWithTerminalRise) {
    // P(n)=10, window closes 10 except P(n+h)=12: Direct = 1 + 0 + 1 = 2,
    // Direct - P(n) = -8 -> label 0.
    std::vector<double> closes(12, 10.0);
    closes[11] = 12.0;
    const auto s = from_closes(closes);
    const double direct = relative_direction(s, 1, 10);
    EXPECT_DOUBLE_EQ(direct, 2.0);
    EXPECT_EQ(target(s, 10).values[1], 0);
}

TEST(RelativeDirection, HandSubstitutionLargeMove) {
    // P(n)=10, window all 30: Direct = 10+10+10 = 30; Direct - P(n) = 20 -> 1.
    std::vector<double> closes(12, 30.0);
    closes[0] = 10.0;
    closes[1] = 10.0;
    const auto s = from_closes(closes);
    EXPECT_DOUBLE_EQ(relative_direction(s, 1, 10), 30.0);
    EXPECT_EQ(target(s, 10).values[1], 1);
}

TEST(Target, DoublingAndHalvingPrices) {
    std::vector<double> doubling, halving;
    double p = 1.0, q = 1e9;
    for (int i = 0; i < 40; ++i) {
        doubling.push_back(p);
        halving.push_back(q);
        p *= 2.0;
        q /= 2.0;
    }
    const auto t_up = target(from_closes(doubling), 10);
    const auto t_dn = target(from_closes(halving), 10);
    for (std::size_t n = 0; n + 10 < doubling.size(); ++n) {
        EXPECT_EQ(t_up.values[n], 1);
        EXPECT_EQ(t_dn.values[n], 0);
    }
}

TEST(Target, LastHorizonPositionsUndefined) {
    const auto s = from_closes(std::vector<double>(30, 5.0));
    const auto t = target(s, 10);
    for (std::size_t n = 20; n < 30; ++n) EXPECT_EQ(t.values[n], -1);
    EXPECT_THROW(target(from_closes(std::vector<double>(10, 5.0)), 10), DataError);
}

TEST(Target, MatchesOracleOnRandomTriples) {
    Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t len = 15 + rng.uniform_int(0, 60);
        const auto s = oracle::random_series(1000 + trial, len, 0.15);
        const auto closes = oracle::closes_of(s);
        const std::size_t h = 1 + rng.uniform_int(0, 11);
        if (len <= h) continue;
        const auto t = target(s, static_cast<int>(h));
        for (std::size_t n = 0; n + h < len; ++n) {
            ASSERT_EQ(relative_direction(s, n, h), oracle::relative_direction(closes, n, h));
            ASSERT_EQ(t.values[n], oracle::target_at(closes, n, h));
        }
    }
}

TEST(Target, TieGoesToZero) {
    // All window closes 3x the current close minus epsilon adjustments give
    // Direct - P(n) == 0 exactly: use window all = 5/3 * P(n) with P(n)=3.
    std::vector<double> closes(12, 5.0);
    closes[0] = 3.0;
    const auto s = from_closes(closes);
    EXPECT_DOUBLE_EQ(relative_direction(s, 0, 10), 3.0);
    EXPECT_EQ(target(s, 10).values[0], 0);
}

TEST(Target, ShiftEquivariance) {
    const auto s = oracle::random_series(4242, 80, 0.1);
    const auto full = target(s, 10);
    PriceSeries slice;
    slice.asset_id = s.asset_id;
    slice.bars.assign(s.bars.begin() + 17, s.bars.end());
    const auto sliced = target(slice, 10);
    for (std::size_t n = 0; n < slice.size(); ++n)
        EXPECT_EQ(sliced.values[n], full.values[n + 17]);
}

TEST(Target, DependsOnlyOnWindowCloses) {
    auto s = oracle::random_series(5, 40, 0.1);
    const std::size_t n = 12, h = 10;
    const double base = relative_direction(s, n, h);
    auto perturbed = s;
    perturbed.bars[3].close *= 1.7;
    perturbed.bars[n + h + 2].close *= 0.4;
    EXPECT_DOUBLE_EQ(relative_direction(perturbed, n, h), base);
}

TEST(Target, ThirdsWeightsConfig) {
    std::vector<double> closes(12, 30.0);
    closes[0] = 10.0;
    const auto s = from_closes(closes);
    const double direct = relative_direction(s, 0, 10, DirectionConfig::thirds());
    EXPECT_NEAR(direct, 20.0, 1e-12);
}
