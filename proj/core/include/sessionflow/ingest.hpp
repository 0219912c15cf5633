#pragma once

#include "sessionflow/bounded_queue.hpp"
#include "sessionflow/errors.hpp"
#include "sessionflow/session_record.hpp"

#include <atomic>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

namespace sessionflow {

// A line-aligned byte range of one input file.
struct ChunkDescriptor {
    std::string file_path;
    std::uint64_t byte_offset = 0;
    std::uint64_t byte_length = 0;
    std::uint64_t ordinal = 0;

    friend bool operator==(const ChunkDescriptor&, const ChunkDescriptor&) = default;
};

struct MalformedSample {
    std::uint64_t byte_offset = 0;  // absolute offset of the line in its file
    ErrorKind kind = ErrorKind::MalformedLine;
};

struct RecordBatch {
    std::uint64_t chunk_ordinal = 0;
    std::vector<SessionRecord> records;
    std::uint64_t malformed_count = 0;
    std::optional<MalformedSample> first_malformed;
};

// Passing this as target_chunk_bytes yields one chunk per file.
inline constexpr std::uint64_t kWholeFile = std::numeric_limits<std::uint64_t>::max();

// Splits every file into chunks of roughly target_chunk_bytes, extending each
// chunk to the end of the line it would otherwise cut. Empty files produce no
// chunks. Throws Error(FileNotReadable).
std::vector<ChunkDescriptor> plan_chunks(std::span<const std::string> paths, std::uint64_t target_chunk_bytes);

// Reads and parses one chunk. Malformed and blank lines are skipped; malformed
// ones are counted. Throws Error(FileNotReadable) if the range cannot be read.
RecordBatch read_chunk(const ChunkDescriptor& chunk, const FormatSpec& format = {});

struct WorkerOptions {
    std::size_t worker_count = 1;
    // 0 selects 2 * worker_count.
    std::size_t queue_capacity = 0;
    FormatSpec format;
    const std::atomic<bool>* cancel = nullptr;
};

struct WorkerStats {
    std::size_t queue_capacity = 0;
    std::size_t peak_resident = 0;
};

// Master/worker execution over a bounded queue. The calling thread is the
// master: it enqueues chunk indices in order and blocks while the queue is
// full. Each worker reads a chunk, parses it into a RecordBatch and hands it
// to `consume`. Results come back indexed by chunk ordinal.
//
// Fail-fast: the first failing chunk stops the master, discards queued work
// and is rethrown as WorkerFailure once all workers have joined. Cancellation
// through options.cancel surfaces as Error(Cancelled).
template <class Consume>
auto run_workers(std::span<const ChunkDescriptor> chunks, const WorkerOptions& options, Consume&& consume,
                 WorkerStats* stats = nullptr) -> std::vector<std::invoke_result_t<Consume&, RecordBatch&&>> {
    using Result = std::invoke_result_t<Consume&, RecordBatch&&>;
    if (options.worker_count == 0) {
        throw Error(ErrorKind::InvalidArgument, "worker_count must be >= 1");
    }
    const std::size_t capacity = options.queue_capacity == 0 ? 2 * options.worker_count : options.queue_capacity;

    std::vector<std::optional<Result>> slots(chunks.size());
    BoundedQueue<std::size_t> queue(capacity);
    std::atomic<bool> stop{false};

    std::mutex failure_mutex;
    std::optional<std::size_t> failed_index;
    std::string failure_message;
    bool failure_is_cancel = false;

    auto record_failure = [&](std::size_t index, std::string message, bool is_cancel) {
        {
            std::lock_guard lock(failure_mutex);
            if (!failed_index || index < *failed_index) {
                failed_index = index;
                failure_message = std::move(message);
                failure_is_cancel = is_cancel;
            }
        }
        stop.store(true);
        queue.close(/*discard=*/true);
    };

    auto cancelled = [&] { return options.cancel != nullptr && options.cancel->load(std::memory_order_relaxed); };

    auto worker = [&] {
        while (auto index = queue.pop()) {
            if (!stop.load()) {
                try {
                    if (cancelled()) {
                        throw Error(ErrorKind::Cancelled, "cancelled");
                    }
                    slots[*index] = consume(read_chunk(chunks[*index], options.format));
                } catch (const Error& e) {
                    record_failure(*index, e.what(), e.kind() == ErrorKind::Cancelled);
                } catch (const std::exception& e) {
                    record_failure(*index, e.what(), false);
                } catch (...) {
                    record_failure(*index, "unknown exception", false);
                }
            }
            queue.release();
        }
    };

    {
        std::vector<std::jthread> workers;
        workers.reserve(options.worker_count);
        for (std::size_t i = 0; i < options.worker_count; ++i) {
            workers.emplace_back(worker);
        }
        for (std::size_t i = 0; i < chunks.size(); ++i) {
            if (stop.load()) {
                break;
            }
            if (cancelled()) {
                record_failure(i, "cancelled", true);
                break;
            }
            if (!queue.push(i)) {
                break;
            }
        }
        queue.close();
    }

    if (stats != nullptr) {
        stats->queue_capacity = capacity;
        stats->peak_resident = queue.peak_resident();
    }
    if (failed_index) {
        if (failure_is_cancel) {
            throw Error(ErrorKind::Cancelled, "run cancelled");
        }
        throw WorkerFailure(chunks[*failed_index].ordinal, failure_message);
    }

    std::vector<Result> results;
    results.reserve(slots.size());
    for (auto& slot : slots) {
        results.push_back(std::move(*slot));
    }
    return results;
}

}  // namespace sessionflow
