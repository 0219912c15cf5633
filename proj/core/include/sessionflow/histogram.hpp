#pragma once

#include "sessionflow/session_record.hpp"

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace sessionflow {

inline constexpr std::int64_t kMillisPerDay = 60LL * 60 * 24 * 1000;  // 86,400,000 one-ms bins per day
inline constexpr std::int64_t kTenMinutesMs = 600'000;
inline constexpr std::int64_t kOneHourMs = 3'600'000;

struct BinKey {
    std::int64_t ms = 0;  // start of the half-open bin [ms, ms + width)

    friend constexpr auto operator<=>(BinKey, BinKey) = default;
};

struct BinValue {
    std::uint64_t count = 0;
    std::uint64_t bytes = 0;

    BinValue& operator+=(const BinValue& other) noexcept;
    friend BinValue operator+(BinValue a, const BinValue& b) noexcept { return a += b; }
    friend constexpr bool operator==(const BinValue&, const BinValue&) = default;
};

struct BinEntry {
    BinKey key;
    BinValue value;

    friend constexpr bool operator==(const BinEntry&, const BinEntry&) = default;
};

// Sparse, fully reduced histogram: keys strictly ascending, aligned to the
// bin width, and empty bins absent.
class BinnedSeries {
public:
    BinnedSeries() = default;
    explicit BinnedSeries(std::int64_t bin_width_ms);

    // Validates the ordering/alignment invariants; throws
    // Error(InvalidArgument) if they do not hold.
    static BinnedSeries from_entries(std::int64_t bin_width_ms, std::vector<BinEntry> entries);

    std::int64_t bin_width_ms() const noexcept { return bin_width_ms_; }
    std::span<const BinEntry> entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    BinValue totals() const noexcept;

    friend bool operator==(const BinnedSeries&, const BinnedSeries&) = default;

private:
    friend BinnedSeries reduce_tile(std::span<const BinEntry>, std::int64_t);
    friend BinnedSeries merge_scatter(std::span<const BinnedSeries>);
    friend BinnedSeries rebin(const BinnedSeries&, std::int64_t);

    std::int64_t bin_width_ms_ = 1;
    std::vector<BinEntry> entries_;
};

// Number of records per stage-1 tile.
struct TilePlan {
    std::size_t tile_size = 4096;
};

constexpr BinKey bin_key_for(std::int64_t timestamp_ms, std::int64_t bin_width_ms) noexcept {
    return BinKey{floor_div(timestamp_ms, bin_width_ms) * bin_width_ms};
}

// One (bin, (1, bytes)) pair per record, in input order.
std::vector<BinEntry> map_records(std::span<const SessionRecord> records, std::int64_t bin_width_ms);

// Sorts the pairs by key and folds each equal-key run with a balanced
// pairwise tree of additions, in place.
BinnedSeries reduce_tile(std::span<const BinEntry> pairs, std::int64_t bin_width_ms);

// Merges sorted partials by a balanced tree of two-way merges, adding values
// on key collisions. An empty input gives an empty 1 ms series.
// Throws Error(MixedBinWidth).
BinnedSeries merge_scatter(std::span<const BinnedSeries> partials);

// Re-bins into coarser buckets. Throws Error(NonDivisibleWidth) unless
// coarse_width_ms is a positive multiple of the series width.
BinnedSeries rebin(const BinnedSeries& series, std::int64_t coarse_width_ms);

// Stage-1 reduction of one record list: map, cut into tiles of
// plan.tile_size, reduce each tile, merge the tiles.
BinnedSeries reduce_records(std::span<const SessionRecord> records, std::int64_t bin_width_ms, const TilePlan& plan);

// FNV-1a over (width, key, count, bytes) for cheap output equality checks.
std::uint64_t series_digest(const BinnedSeries& series) noexcept;

}  // namespace sessionflow
