#include "sessionflow/errors.hpp"
#include "sessionflow/histogram.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <unordered_map>

namespace sessionflow {
namespace {

BinEntry entry(std::int64_t key, std::uint64_t count, std::uint64_t bytes) {
    return {BinKey{key}, BinValue{count, bytes}};
}

SessionRecord at(std::int64_t t, std::uint64_t bytes) {
    SessionRecord r;
    r.capture_time = t;
    r.bytes = bytes;
    return r;
}

std::vector<SessionRecord> random_records(std::size_t n, std::uint64_t seed, std::int64_t span_ms) {
    std::mt19937_64 rng(seed);
    std::vector<SessionRecord> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(at(1'514'764'800'000 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(span_ms)),
                         rng() % 100'000));
    }
    return out;
}

TEST(MapRecords, OnePairPerRecord) {
    const auto pairs = map_records(std::vector{at(1234, 700)}, 1);
    ASSERT_EQ(pairs.size(), 1u);
    EXPECT_EQ(pairs[0], entry(1234, 1, 700));
    EXPECT_TRUE(map_records({}, 1).empty());
    // 86399999 floor 3600000 -> 23 * 3600000
    EXPECT_EQ(map_records(std::vector{at(86'399'999, 1)}, kOneHourMs)[0].key.ms, 82'800'000);
    EXPECT_EQ(map_records(std::vector{at(-1, 1)}, 1000)[0].key.ms, -1000);
    const auto many = random_records(1000, 1, kMillisPerDay);
    EXPECT_EQ(map_records(many, 7).size(), many.size());
}

TEST(ReduceTile, GroupsEqualKeys) {
    const std::vector<BinEntry> pairs{entry(5, 1, 10), entry(5, 1, 20), entry(7, 1, 5)};
    // hash-map grouping oracle
    std::unordered_map<std::int64_t, BinValue> oracle;
    for (const auto& p : pairs) {
        oracle[p.key.ms] += p.value;
    }
    const BinnedSeries s = reduce_tile(pairs, 1);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s.entries()[0], entry(5, oracle[5].count, oracle[5].bytes));
    EXPECT_EQ(s.entries()[1], entry(7, oracle[7].count, oracle[7].bytes));
    EXPECT_EQ(s.entries()[0], entry(5, 2, 30));
}

TEST(ReduceTile, UniqueKeysAreSortedAndRunsCollapse) {
    const std::vector<BinEntry> unique{entry(9, 1, 1), entry(3, 1, 2), entry(6, 1, 3)};
    const BinnedSeries s = reduce_tile(unique, 3);
    EXPECT_EQ(std::vector(s.entries().begin(), s.entries().end()),
              (std::vector{entry(3, 1, 2), entry(6, 1, 3), entry(9, 1, 1)}));

    for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 13u, 1000u}) {
        std::vector<BinEntry> same(n, entry(42, 1, 3));
        const BinnedSeries collapsed = reduce_tile(same, 1);
        ASSERT_EQ(collapsed.size(), 1u);
        EXPECT_EQ(collapsed.entries()[0], entry(42, n, 3 * n));
    }
    EXPECT_TRUE(reduce_tile({}, 1).empty());
}

TEST(MergeScatter, EmptyIdentityAndCollision) {
    EXPECT_TRUE(merge_scatter({}).empty());
    const BinnedSeries a = BinnedSeries::from_entries(1000, {entry(0, 1, 1), entry(1000, 2, 2)});
    EXPECT_EQ(merge_scatter(std::vector{a}), a);

    const BinnedSeries b = BinnedSeries::from_entries(1000, {entry(1000, 3, 30), entry(5000, 1, 1)});
    const BinnedSeries merged = merge_scatter(std::vector{a, b});
    EXPECT_EQ(std::vector(merged.entries().begin(), merged.entries().end()),
              (std::vector{entry(0, 1, 1), entry(1000, 5, 32), entry(5000, 1, 1)}));
}

TEST(MergeScatter, MatchesSequentialWholeInputReduce) {
    const auto records = random_records(5000, 2, 20'000);
    const BinnedSeries whole = reduce_tile(map_records(records, 1), 1);
    std::vector<BinnedSeries> parts;
    for (std::size_t begin = 0; begin < records.size(); begin += 333) {
        const std::size_t len = std::min<std::size_t>(333, records.size() - begin);
        parts.push_back(reduce_tile(map_records(std::span(records).subspan(begin, len), 1), 1));
    }
    EXPECT_EQ(merge_scatter(parts), whole);
    std::reverse(parts.begin(), parts.end());
    EXPECT_EQ(merge_scatter(parts), whole);
}

TEST(MergeScatter, RejectsMixedWidths) {
    try {
        merge_scatter(std::vector{BinnedSeries(1), BinnedSeries(1000)});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::MixedBinWidth);
    }
}

TEST(Rebin, SameWidthIsIdentity) {
    const auto records = random_records(2000, 3, kOneHourMs);
    const BinnedSeries hourly = reduce_records(records, kOneHourMs, {});
    EXPECT_EQ(rebin(hourly, kOneHourMs), hourly);
}

TEST(Rebin, MergesFineBins) {
    const BinnedSeries fine = BinnedSeries::from_entries(1, {entry(0, 1, 10), entry(999, 1, 20)});
    const BinnedSeries coarse = rebin(fine, 1000);
    ASSERT_EQ(coarse.size(), 1u);
    EXPECT_EQ(coarse.entries()[0], entry(0, 2, 30));
    EXPECT_EQ(coarse.bin_width_ms(), 1000);
}

TEST(Rebin, TenMinuteBinsConserveTotals) {
    const auto records = random_records(10'000, 4, kMillisPerDay);
    const BinnedSeries fine = reduce_records(records, 1, {});
    const BinnedSeries ten = rebin(fine, kTenMinutesMs);
    EXPECT_EQ(ten.totals(), fine.totals());
    EXPECT_LE(ten.size(), 144u);
    EXPECT_TRUE(testing::series_equals_oracle(ten, testing::oracle_histogram(records, kTenMinutesMs)));
}

TEST(Rebin, RejectsNonDivisibleWidth) {
    try {
        rebin(BinnedSeries(1000), 1500);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonDivisibleWidth);
    }
    EXPECT_THROW(rebin(BinnedSeries(1000), 0), Error);
}

TEST(BinnedSeries, FromEntriesEnforcesInvariants) {
    EXPECT_THROW(BinnedSeries::from_entries(10, {entry(5, 1, 1)}), Error);
    EXPECT_THROW(BinnedSeries::from_entries(10, {entry(10, 1, 1), entry(10, 1, 1)}), Error);
    EXPECT_THROW(BinnedSeries::from_entries(10, {entry(20, 1, 1), entry(10, 1, 1)}), Error);
    EXPECT_THROW(BinnedSeries::from_entries(10, {entry(20, 0, 0)}), Error);
    EXPECT_THROW(BinnedSeries(0), Error);
}

TEST(ReduceRecords, PropertiesAgainstHashMapOracle) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = rng() % 3000;
        const std::int64_t width = std::vector<std::int64_t>{1, 7, 1000, kOneHourMs}[rng() % 4];
        auto records = random_records(n, rng(), 1 + static_cast<std::int64_t>(rng() % 100'000));
        const auto oracle = testing::oracle_histogram(records, width);
        const BinnedSeries base = reduce_records(records, width, {1000});
        ASSERT_TRUE(testing::series_equals_oracle(base, oracle));

        // conservation
        std::uint64_t bytes = 0;
        for (const auto& r : records) {
            bytes += r.bytes;
        }
        EXPECT_EQ(base.totals(), (BinValue{n, bytes}));
        EXPECT_LE(base.size(), n);

        // tiling and permutation invariance
        for (std::size_t tile : {std::size_t{1}, std::size_t{2}, std::size_t{7}, std::size_t{1000},
                                 std::max<std::size_t>(n, 1)}) {
            EXPECT_EQ(reduce_records(records, width, {tile}), base);
        }
        std::shuffle(records.begin(), records.end(), rng);
        EXPECT_EQ(reduce_records(records, width, {13}), base);
    }
}

TEST(SeriesDigest, DistinguishesContentAndWidth) {
    const BinnedSeries a = BinnedSeries::from_entries(1000, {entry(0, 1, 1)});
    const BinnedSeries b = BinnedSeries::from_entries(1000, {entry(0, 1, 2)});
    EXPECT_EQ(series_digest(a), series_digest(BinnedSeries::from_entries(1000, {entry(0, 1, 1)})));
    EXPECT_NE(series_digest(a), series_digest(b));
    EXPECT_NE(series_digest(BinnedSeries(1)), series_digest(BinnedSeries(1000)));
}

}  // namespace
}  // namespace sessionflow
