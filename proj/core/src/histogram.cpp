#include "sessionflow/histogram.hpp"

#include "sessionflow/errors.hpp"

#include <algorithm>
#include <cassert>

#include <fmt/format.h>

namespace sessionflow {

BinValue& BinValue::operator+=(const BinValue& other) noexcept {
    [[maybe_unused]] const bool overflow = __builtin_add_overflow(count, other.count, &count) |
                                           __builtin_add_overflow(bytes, other.bytes, &bytes);
    assert(!overflow && "64-bit bin accumulator overflow");
    return *this;
}

BinnedSeries::BinnedSeries(std::int64_t bin_width_ms) : bin_width_ms_(bin_width_ms) {
    if (bin_width_ms <= 0) {
        throw Error(ErrorKind::InvalidArgument, fmt::format("bin width must be positive, got {}", bin_width_ms));
    }
}

BinnedSeries BinnedSeries::from_entries(std::int64_t bin_width_ms, std::vector<BinEntry> entries) {
    BinnedSeries s(bin_width_ms);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const BinEntry& e = entries[i];
        if (e.key.ms != bin_key_for(e.key.ms, bin_width_ms).ms) {
            throw Error(ErrorKind::InvalidArgument,
                        fmt::format("key {} not aligned to width {}", e.key.ms, bin_width_ms));
        }
        if (i > 0 && !(entries[i - 1].key < e.key)) {
            throw Error(ErrorKind::InvalidArgument, "series keys must be strictly increasing");
        }
        if (e.value.count == 0 && e.value.bytes == 0) {
            throw Error(ErrorKind::InvalidArgument, "empty bins must be omitted");
        }
    }
    s.entries_ = std::move(entries);
    return s;
}

BinValue BinnedSeries::totals() const noexcept {
    BinValue total;
    for (const auto& e : entries_) {
        total += e.value;
    }
    return total;
}

std::vector<BinEntry> map_records(std::span<const SessionRecord> records, std::int64_t bin_width_ms) {
    std::vector<BinEntry> pairs;
    pairs.reserve(records.size());
    for (const SessionRecord& r : records) {
        pairs.push_back({bin_key_for(r.capture_time, bin_width_ms), BinValue{1, r.bytes}});
    }
    return pairs;
}

BinnedSeries reduce_tile(std::span<const BinEntry> pairs, std::int64_t bin_width_ms) {
    BinnedSeries out(bin_width_ms);
    std::vector<BinEntry> work(pairs.begin(), pairs.end());
    std::sort(work.begin(), work.end(), [](const BinEntry& a, const BinEntry& b) { return a.key < b.key; });

    std::size_t write = 0;
    std::size_t run_begin = 0;
    while (run_begin < work.size()) {
        std::size_t run_end = run_begin + 1;
        while (run_end < work.size() && work[run_end].key == work[run_begin].key) {
            ++run_end;
        }
        // Each generation sums disjoint pairs and halves the live elements;
        // the run total ends up in its first slot.
        const std::size_t len = run_end - run_begin;
        for (std::size_t stride = 1; stride < len; stride *= 2) {
            for (std::size_t i = 0; i + stride < len; i += 2 * stride) {
                work[run_begin + i].value += work[run_begin + i + stride].value;
            }
        }
        work[write++] = work[run_begin];
        run_begin = run_end;
    }
    work.resize(write);
    out.entries_ = std::move(work);
    return out;
}

namespace {

std::vector<BinEntry> merge_two(std::span<const BinEntry> a, std::span<const BinEntry> b) {
    std::vector<BinEntry> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].key < b[j].key) {
            out.push_back(a[i++]);
        } else if (b[j].key < a[i].key) {
            out.push_back(b[j++]);
        } else {
            out.push_back({a[i].key, a[i].value + b[j].value});
            ++i;
            ++j;
        }
    }
    out.insert(out.end(), a.begin() + static_cast<std::ptrdiff_t>(i), a.end());
    out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(j), b.end());
    return out;
}

}  // namespace

BinnedSeries merge_scatter(std::span<const BinnedSeries> partials) {
    if (partials.empty()) {
        return BinnedSeries{};
    }
    const std::int64_t width = partials.front().bin_width_ms();
    for (const auto& p : partials) {
        if (p.bin_width_ms() != width) {
            throw Error(ErrorKind::MixedBinWidth,
                        fmt::format("cannot merge series of widths {} and {}", width, p.bin_width_ms()));
        }
    }
    BinnedSeries out(width);
    if (partials.size() == 1) {
        out.entries_ = partials.front().entries_;
        return out;
    }
    std::vector<std::vector<BinEntry>> level;
    level.reserve((partials.size() + 1) / 2);
    for (std::size_t i = 0; i < partials.size(); i += 2) {
        if (i + 1 < partials.size()) {
            level.push_back(merge_two(partials[i].entries(), partials[i + 1].entries()));
        } else {
            level.emplace_back(partials[i].entries().begin(), partials[i].entries().end());
        }
    }
    while (level.size() > 1) {
        std::vector<std::vector<BinEntry>> next;
        next.reserve((level.size() + 1) / 2);
        for (std::size_t i = 0; i < level.size(); i += 2) {
            if (i + 1 < level.size()) {
                next.push_back(merge_two(level[i], level[i + 1]));
            } else {
                next.push_back(std::move(level[i]));
            }
        }
        level = std::move(next);
    }
    out.entries_ = std::move(level.front());
    return out;
}

BinnedSeries rebin(const BinnedSeries& series, std::int64_t coarse_width_ms) {
    const std::int64_t fine = series.bin_width_ms();
    if (coarse_width_ms <= 0 || coarse_width_ms % fine != 0) {
        throw Error(ErrorKind::NonDivisibleWidth,
                    fmt::format("width {} is not a positive multiple of {}", coarse_width_ms, fine));
    }
    BinnedSeries out(coarse_width_ms);
    for (const BinEntry& e : series.entries()) {
        const BinKey key = bin_key_for(e.key.ms, coarse_width_ms);
        if (!out.entries_.empty() && out.entries_.back().key == key) {
            out.entries_.back().value += e.value;
        } else {
            out.entries_.push_back({key, e.value});
        }
    }
    return out;
}

BinnedSeries reduce_records(std::span<const SessionRecord> records, std::int64_t bin_width_ms, const TilePlan& plan) {
    const std::size_t tile = std::max<std::size_t>(plan.tile_size, 1);
    const std::vector<BinEntry> pairs = map_records(records, bin_width_ms);
    std::vector<BinnedSeries> tiles;
    tiles.reserve(pairs.size() / tile + 1);
    for (std::size_t begin = 0; begin < pairs.size(); begin += tile) {
        const std::size_t len = std::min(tile, pairs.size() - begin);
        tiles.push_back(reduce_tile(std::span(pairs).subspan(begin, len), bin_width_ms));
    }
    if (tiles.empty()) {
        return BinnedSeries(bin_width_ms);
    }
    return merge_scatter(tiles);
}

std::uint64_t series_digest(const BinnedSeries& series) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xffu;
            h *= 0x100000001b3ULL;
        }
    };
    mix(static_cast<std::uint64_t>(series.bin_width_ms()));
    for (const BinEntry& e : series.entries()) {
        mix(static_cast<std::uint64_t>(e.key.ms));
        mix(e.value.count);
        mix(e.value.bytes);
    }
    return h;
}

}  // namespace sessionflow
