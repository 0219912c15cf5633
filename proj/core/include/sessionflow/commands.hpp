#pragma once

#include "sessionflow/generator.hpp"
#include "sessionflow/histogram.hpp"
#include "sessionflow/pipeline.hpp"
#include "sessionflow/series_io.hpp"

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sessionflow {

struct RunConfig {
    // Files or directories; directories contribute their regular files in
    // lexicographic path order.
    std::vector<std::string> input_paths;
    std::string home_network_path;
    std::vector<std::string> watchlist_paths;
    std::int64_t bin_width_ms = 1;
    std::int64_t report_width_ms = kOneHourMs;
    std::size_t worker_count = 1;
    std::size_t lanes = 1;
    std::size_t tile_size = 4096;
    std::uint64_t target_chunk_bytes = 8ULL << 20;
    std::string output_dir = ".";
    SeriesFormat output_format = SeriesFormat::Csv;
    FormatSpec format;
    const std::atomic<bool>* cancel = nullptr;

    // Throws Error(InvalidArgument) on a zero count or a report width that
    // is not a multiple of the bin width.
    void validate() const;
};

struct SeriesTotals {
    std::string label;  // "outgoing", "ingoing", "<list>.outgoing", ...
    BinValue totals;
    std::string output_file;
};

struct RunSummary {
    std::uint64_t records_read = 0;
    std::uint64_t malformed_skipped = 0;
    std::vector<SeriesTotals> series;
};

// Regular files named by the inputs, directories expanded. Throws
// Error(FileNotReadable) for a path that does not exist.
std::vector<std::string> expand_input_paths(const std::vector<std::string>& inputs);

struct LoadedRun {
    HomeNetwork home;
    std::vector<Watchlist> watchlists;
    std::vector<ChunkDescriptor> chunks;
};

// Loads the home network and watchlists and plans the chunks.
LoadedRun prepare_run(const RunConfig& config);

PipelineOptions pipeline_options(const RunConfig& config);

// Runs the pipeline, writes <out>/outgoing.<ext>, <out>/ingoing.<ext> and
// <out>/<list>.{outgoing,ingoing}.<ext> re-binned to report_width_ms, and
// prints a summary to `log`. Files appear only if every file was written.
RunSummary cmd_run(const RunConfig& config, std::ostream& log);

// Writes a synthetic session log. The home network is read from
// home_network_path.
void cmd_generate(const std::string& home_network_path, const GeneratorConfig& config, const std::string& out_path);

struct BenchRow {
    std::size_t lanes = 1;
    std::size_t worker_count = 1;
    std::uint64_t input_lines = 0;
    std::uint64_t input_bytes = 0;
    double elapsed_seconds = 0.0;  // median over repetitions
    double speedup_vs_baseline = 1.0;
    std::uint64_t output_hash = 0;
};

struct BenchReport {
    std::vector<BenchRow> rows;  // rows[0] is the lanes=1, workers=1 baseline
    unsigned hardware_threads = 0;
};

// For every lanes value L (1 is always measured first), runs the full
// pipeline `repetitions` times with L lanes and L workers and records the
// median wall time. Every run's output digest must equal the baseline's,
// else Error(MismatchedOutputs) is thrown and no timing is reported.
// Warnings (small inputs) go to `warn`.
BenchReport cmd_bench(const RunConfig& config, const std::vector<std::size_t>& lane_sweep, std::size_t repetitions,
                      std::ostream& warn);

double median(std::vector<double> values);

std::string format_bench_table(const BenchReport& report);
std::string format_bench_csv(const BenchReport& report);

}  // namespace sessionflow
