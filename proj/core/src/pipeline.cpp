#include "sessionflow/pipeline.hpp"

#include "sessionflow/lane_pool.hpp"

#include <algorithm>
#include <future>
#include <memory>

namespace sessionflow {

namespace {

struct ChunkPartial {
    // Index 2*v is outgoing, 2*v+1 ingoing, for view v (0 = all sessions,
    // 1.. = watchlists).
    std::vector<BinnedSeries> series;
    std::uint64_t records = 0;
    std::uint64_t malformed = 0;
    std::optional<MalformedSample> first_malformed;
};

// Waits for every pending lane task before the data they reference goes
// out of scope, even when unwinding.
class FutureSet {
public:
    ~FutureSet() {
        for (auto& f : futures_) {
            if (f.valid()) {
                f.wait();
            }
        }
    }

    void add(std::future<BinnedSeries> f) { futures_.push_back(std::move(f)); }

    std::vector<BinnedSeries> take_all() {
        std::vector<BinnedSeries> out;
        out.reserve(futures_.size());
        for (auto& f : futures_) {
            out.push_back(f.get());
        }
        futures_.clear();
        return out;
    }

private:
    std::vector<std::future<BinnedSeries>> futures_;
};

BinnedSeries reduce_tile_group(std::span<const BinEntry> pairs, std::size_t tile_size, std::int64_t width) {
    std::vector<BinnedSeries> tiles;
    tiles.reserve(pairs.size() / tile_size + 1);
    for (std::size_t begin = 0; begin < pairs.size(); begin += tile_size) {
        tiles.push_back(reduce_tile(pairs.subspan(begin, std::min(tile_size, pairs.size() - begin)), width));
    }
    return tiles.empty() ? BinnedSeries(width) : merge_scatter(tiles);
}

// Stage 1 for one record list. Tiles are dealt to lanes as contiguous groups
// so each lane task reduces several tiles.
BinnedSeries reduce_on_lanes(std::span<const SessionRecord> records, const PipelineOptions& options,
                             LanePool* pool) {
    const std::int64_t width = options.bin_width_ms;
    const std::size_t tile_size = std::max<std::size_t>(options.plan.tile_size, 1);
    const std::vector<BinEntry> pairs = map_records(records, width);
    const std::size_t tile_count = (pairs.size() + tile_size - 1) / tile_size;
    if (pool == nullptr || tile_count <= 1) {
        return reduce_tile_group(pairs, tile_size, width);
    }

    const std::size_t groups = std::min(pool->lanes(), tile_count);
    const std::size_t tiles_per_group = (tile_count + groups - 1) / groups;
    const std::span<const BinEntry> all(pairs);
    FutureSet pending;
    for (std::size_t g = 0; g < groups; ++g) {
        const std::size_t begin = std::min(g * tiles_per_group * tile_size, pairs.size());
        const std::size_t end = std::min(begin + tiles_per_group * tile_size, pairs.size());
        if (begin == end) {
            break;
        }
        const auto slice = all.subspan(begin, end - begin);
        pending.add(pool->submit([slice, tile_size, width] { return reduce_tile_group(slice, tile_size, width); }));
    }
    const std::vector<BinnedSeries> partials = pending.take_all();
    return merge_scatter(partials);
}

}  // namespace

PipelineResult histogram_pipeline(std::span<const ChunkDescriptor> chunks, const HomeNetwork& home,
                                  const PipelineOptions& options, std::span<const Watchlist> watchlists) {
    if (options.bin_width_ms <= 0) {
        throw Error(ErrorKind::InvalidArgument, "bin_width_ms must be >= 1");
    }
    if (options.lanes == 0) {
        throw Error(ErrorKind::InvalidArgument, "lanes must be >= 1");
    }
    const std::size_t view_count = 1 + watchlists.size();
    std::unique_ptr<LanePool> pool;
    if (options.lanes > 1) {
        pool = std::make_unique<LanePool>(options.lanes);
    }

    auto consume = [&](RecordBatch&& batch) {
        ChunkPartial partial;
        partial.records = batch.records.size();
        partial.malformed = batch.malformed_count;
        partial.first_malformed = batch.first_malformed;
        partial.series.reserve(2 * view_count);

        DirectionalBatches dirs = discriminate_batch(std::move(batch), home);
        partial.series.push_back(reduce_on_lanes(dirs.outgoing.records, options, pool.get()));
        partial.series.push_back(reduce_on_lanes(dirs.ingoing.records, options, pool.get()));
        for (const Watchlist& list : watchlists) {
            const RecordBatch out = filter_batch(dirs.outgoing, list);
            const RecordBatch in = filter_batch(dirs.ingoing, list);
            partial.series.push_back(reduce_on_lanes(out.records, options, pool.get()));
            partial.series.push_back(reduce_on_lanes(in.records, options, pool.get()));
        }
        return partial;
    };

    WorkerOptions worker_options;
    worker_options.worker_count = options.worker_count;
    worker_options.queue_capacity = options.queue_capacity;
    worker_options.format = options.format;
    worker_options.cancel = options.cancel;

    PipelineResult result;
    std::vector<ChunkPartial> partials = run_workers(chunks, worker_options, consume, &result.worker_stats);

    std::vector<BinnedSeries> merged;
    merged.reserve(2 * view_count);
    for (std::size_t s = 0; s < 2 * view_count; ++s) {
        std::vector<BinnedSeries> column;
        column.reserve(partials.size());
        for (auto& p : partials) {
            column.push_back(std::move(p.series[s]));
        }
        merged.push_back(column.empty() ? BinnedSeries(options.bin_width_ms) : merge_scatter(column));
    }
    for (std::size_t i = 0; i < partials.size(); ++i) {
        result.records += partials[i].records;
        result.malformed += partials[i].malformed;
        if (!result.first_malformed && partials[i].first_malformed) {
            result.first_malformed.emplace(chunks[i], *partials[i].first_malformed);
        }
    }

    result.all = {std::move(merged[0]), std::move(merged[1])};
    for (std::size_t v = 1; v < view_count; ++v) {
        result.watchlists.push_back({std::move(merged[2 * v]), std::move(merged[2 * v + 1])});
    }
    return result;
}

}  // namespace sessionflow
