#pragma once

#include "sessionflow/discriminator.hpp"
#include "sessionflow/histogram.hpp"
#include "sessionflow/ingest.hpp"
#include "sessionflow/watchlist.hpp"

#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sessionflow {

struct DirectionalSeries {
    BinnedSeries outgoing;
    BinnedSeries ingoing;

    friend bool operator==(const DirectionalSeries&, const DirectionalSeries&) = default;
};

struct PipelineOptions {
    std::int64_t bin_width_ms = 1;
    TilePlan plan;
    // Concurrent stage-1 reducers.
    std::size_t lanes = 1;
    // Concurrent chunk readers/parsers.
    std::size_t worker_count = 1;
    std::size_t queue_capacity = 0;
    FormatSpec format;
    const std::atomic<bool>* cancel = nullptr;
};

struct PipelineResult {
    DirectionalSeries all;
    // Same order as the watchlists passed in.
    std::vector<DirectionalSeries> watchlists;
    std::uint64_t records = 0;
    std::uint64_t malformed = 0;
    // First malformed line in chunk order, if any.
    std::optional<std::pair<ChunkDescriptor, MalformedSample>> first_malformed;
    WorkerStats worker_stats;
};

// Two-stage map-reduce over the chunks:
//   stage 1 (per chunk): parse, discriminate, optionally filter per
//     watchlist, map to bins, cut into tiles and reduce the tiles on `lanes`
//     reducers; each chunk yields thread-private partial series.
//   stage 2: merge_scatter of all chunk partials, per output series.
// The output is identical for every (worker_count, lanes, tile_size,
// chunking) configuration.
PipelineResult histogram_pipeline(std::span<const ChunkDescriptor> chunks, const HomeNetwork& home,
                                  const PipelineOptions& options, std::span<const Watchlist> watchlists = {});

}  // namespace sessionflow
