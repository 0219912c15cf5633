#include "sessionflow/commands.hpp"

#include "sessionflow/errors.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <thread>

#include <unistd.h>

#include <fmt/format.h>

namespace sessionflow {

namespace fs = std::filesystem;

namespace {

// Writes every output to a temporary sibling and renames them into place
// only after all writes succeeded. Leftover temporaries are removed on
// destruction.
class OutputTransaction {
public:
    explicit OutputTransaction(fs::path dir) : dir_(std::move(dir)) {}

    ~OutputTransaction() {
        for (const auto& [temp, final_path] : pending_) {
            std::error_code ignored;
            fs::remove(temp, ignored);
        }
    }

    template <class Writer>
    void write(const std::string& name, Writer&& writer) {
        const fs::path final_path = dir_ / name;
        const fs::path temp = dir_ / fmt::format(".{}.tmp-{}", name, ::getpid());
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorKind::FileNotWritable, fmt::format("cannot write '{}'", temp.string()));
        }
        pending_.emplace_back(temp, final_path);
        writer(out);
        out.flush();
        if (!out) {
            throw Error(ErrorKind::FileNotWritable, fmt::format("write to '{}' failed", temp.string()));
        }
    }

    void commit() {
        for (const auto& [temp, final_path] : pending_) {
            std::error_code ec;
            fs::rename(temp, final_path, ec);
            if (ec) {
                throw Error(ErrorKind::FileNotWritable,
                            fmt::format("cannot move output into '{}': {}", final_path.string(), ec.message()));
            }
        }
        pending_.clear();
    }

private:
    fs::path dir_;
    std::vector<std::pair<fs::path, fs::path>> pending_;
};

std::string watchlist_name(const std::string& path) {
    return fs::path(path).stem().string();
}

}  // namespace

void RunConfig::validate() const {
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidArgument, msg); };
    if (input_paths.empty()) {
        fail("at least one --input is required");
    }
    if (home_network_path.empty()) {
        fail("--home-net is required");
    }
    if (bin_width_ms < 1) {
        fail("--bin-width-ms must be >= 1");
    }
    if (report_width_ms < 1 || report_width_ms % bin_width_ms != 0) {
        fail(fmt::format("--report-width-ms ({}) must be a positive multiple of --bin-width-ms ({})",
                         report_width_ms, bin_width_ms));
    }
    if (worker_count < 1 || lanes < 1 || tile_size < 1 || target_chunk_bytes < 1) {
        fail("--workers, --lanes, --tile-size and --chunk-bytes must all be >= 1");
    }
    format.validate();
}

std::vector<std::string> expand_input_paths(const std::vector<std::string>& inputs) {
    std::vector<std::string> files;
    for (const std::string& input : inputs) {
        std::error_code ec;
        if (fs::is_directory(input, ec)) {
            std::vector<std::string> found;
            for (const auto& entry : fs::recursive_directory_iterator(input, ec)) {
                if (entry.is_regular_file()) {
                    found.push_back(entry.path().string());
                }
            }
            if (ec) {
                throw Error(ErrorKind::FileNotReadable, fmt::format("cannot list '{}': {}", input, ec.message()));
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else if (fs::is_regular_file(input, ec)) {
            files.push_back(input);
        } else {
            throw Error(ErrorKind::FileNotReadable, fmt::format("cannot read input '{}'", input));
        }
    }
    return files;
}

LoadedRun prepare_run(const RunConfig& config) {
    config.validate();
    HomeNetwork home = load_home_network(config.home_network_path);
    std::vector<Watchlist> lists;
    std::set<std::string> names;
    for (const std::string& path : config.watchlist_paths) {
        std::string name = watchlist_name(path);
        if (name == "outgoing" || name == "ingoing" || !names.insert(name).second) {
            throw Error(ErrorKind::InvalidArgument,
                        fmt::format("watchlist file name '{}' collides with another output", name));
        }
        lists.push_back(load_watchlist(path, std::move(name)));
    }
    const std::vector<std::string> files = expand_input_paths(config.input_paths);
    return LoadedRun{std::move(home), std::move(lists), plan_chunks(files, config.target_chunk_bytes)};
}

PipelineOptions pipeline_options(const RunConfig& config) {
    PipelineOptions options;
    options.bin_width_ms = config.bin_width_ms;
    options.plan.tile_size = config.tile_size;
    options.lanes = config.lanes;
    options.worker_count = config.worker_count;
    options.format = config.format;
    options.cancel = config.cancel;
    return options;
}

RunSummary cmd_run(const RunConfig& config, std::ostream& log) {
    const LoadedRun run = prepare_run(config);
    const PipelineResult result =
        histogram_pipeline(run.chunks, run.home, pipeline_options(config), run.watchlists);

    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec) {
        throw Error(ErrorKind::FileNotWritable,
                    fmt::format("cannot create output directory '{}': {}", config.output_dir, ec.message()));
    }

    RunSummary summary;
    summary.records_read = result.records;
    summary.malformed_skipped = result.malformed;

    OutputTransaction tx(config.output_dir);
    const std::string ext(file_extension(config.output_format));
    auto emit = [&](const std::string& label, const BinnedSeries& series) {
        const BinnedSeries report = rebin(series, config.report_width_ms);
        const std::string file = fmt::format("{}.{}", label, ext);
        tx.write(file, [&](std::ostream& out) { write_series(out, report, config.output_format); });
        summary.series.push_back({label, report.totals(), (fs::path(config.output_dir) / file).string()});
    };
    emit("outgoing", result.all.outgoing);
    emit("ingoing", result.all.ingoing);
    for (std::size_t i = 0; i < run.watchlists.size(); ++i) {
        emit(run.watchlists[i].name() + ".outgoing", result.watchlists[i].outgoing);
        emit(run.watchlists[i].name() + ".ingoing", result.watchlists[i].ingoing);
    }
    tx.commit();

    log << fmt::format("records_read={}\nmalformed_skipped={}\n", summary.records_read, summary.malformed_skipped);
    if (result.first_malformed) {
        const auto& [chunk, sample] = *result.first_malformed;
        log << fmt::format("first_malformed={} at byte {} of {}\n", to_string(sample.kind), sample.byte_offset,
                           chunk.file_path);
    }
    for (const SeriesTotals& s : summary.series) {
        log << fmt::format("{}: count={} bytes={} -> {}\n", s.label, s.totals.count, s.totals.bytes, s.output_file);
    }
    return summary;
}

void cmd_generate(const std::string& home_network_path, const GeneratorConfig& config, const std::string& out_path) {
    const HomeNetwork home = load_home_network(home_network_path);
    generate_sessions_file(out_path, home, config);
}

double median(std::vector<double> values) {
    if (values.empty()) {
        return 0.0;
    }
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 == 1 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
}

BenchReport cmd_bench(const RunConfig& config, const std::vector<std::size_t>& lane_sweep, std::size_t repetitions,
                      std::ostream& warn) {
    if (repetitions == 0) {
        throw Error(ErrorKind::InvalidArgument, "--reps must be >= 1");
    }
    std::vector<std::size_t> sweep{1};
    for (std::size_t lanes : lane_sweep) {
        if (lanes == 0) {
            throw Error(ErrorKind::InvalidArgument, "--lane-sweep values must be >= 1");
        }
        if (std::find(sweep.begin(), sweep.end(), lanes) == sweep.end()) {
            sweep.push_back(lanes);
        }
    }

    const LoadedRun run = prepare_run(config);
    std::uint64_t input_bytes = 0;
    for (const auto& c : run.chunks) {
        input_bytes += c.byte_length;
    }

    auto digest_of = [&](const PipelineResult& r) {
        std::uint64_t h = series_digest(r.all.outgoing) ^ (series_digest(r.all.ingoing) * 0x9e3779b97f4a7c15ULL);
        for (const auto& w : r.watchlists) {
            h = h * 0x100000001b3ULL ^ series_digest(w.outgoing);
            h = h * 0x100000001b3ULL ^ series_digest(w.ingoing);
        }
        return h;
    };

    BenchReport report;
    report.hardware_threads = std::thread::hardware_concurrency();
    std::uint64_t baseline_hash = 0;
    for (std::size_t lanes : sweep) {
        PipelineOptions options = pipeline_options(config);
        options.lanes = lanes;
        options.worker_count = lanes;
        BenchRow row;
        row.lanes = lanes;
        row.worker_count = lanes;
        row.input_bytes = input_bytes;
        std::vector<double> times;
        for (std::size_t rep = 0; rep < repetitions; ++rep) {
            const auto start = std::chrono::steady_clock::now();
            const PipelineResult result = histogram_pipeline(run.chunks, run.home, options, run.watchlists);
            const auto stop = std::chrono::steady_clock::now();
            times.push_back(std::chrono::duration<double>(stop - start).count());

            const std::uint64_t hash = digest_of(result);
            if (report.rows.empty() && rep == 0) {
                baseline_hash = hash;
                if (result.records + result.malformed < 1'000'000) {
                    warn << fmt::format("warning: only {} input lines; timings below 10^6 lines are not meaningful\n",
                                        result.records + result.malformed);
                }
            } else if (hash != baseline_hash) {
                throw Error(ErrorKind::MismatchedOutputs,
                            fmt::format("lanes={} repetition {} produced digest {:016x}, baseline {:016x}", lanes,
                                        rep + 1, hash, baseline_hash));
            }
            row.input_lines = result.records + result.malformed;
            row.output_hash = hash;
        }
        row.elapsed_seconds = median(times);
        report.rows.push_back(row);
    }
    const double base = report.rows.front().elapsed_seconds;
    for (auto& row : report.rows) {
        row.speedup_vs_baseline = row.elapsed_seconds > 0.0 ? base / row.elapsed_seconds : 0.0;
    }
    return report;
}

std::string format_bench_table(const BenchReport& report) {
    std::string out = fmt::format("hardware threads: {}\n", report.hardware_threads);
    out += fmt::format("{:>6} {:>8} {:>12} {:>14} {:>12} {:>9} {:>18}\n", "lanes", "workers", "lines", "bytes",
                       "median_s", "speedup", "output_hash");
    for (const auto& r : report.rows) {
        out += fmt::format("{:>6} {:>8} {:>12} {:>14} {:>12.4f} {:>9.3f} {:>18}\n", r.lanes, r.worker_count,
                           r.input_lines, r.input_bytes, r.elapsed_seconds, r.speedup_vs_baseline,
                           fmt::format("{:016x}", r.output_hash));
    }
    return out;
}

std::string format_bench_csv(const BenchReport& report) {
    std::string out = "lanes,worker_count,input_lines,input_bytes,elapsed_seconds,speedup_vs_baseline,output_hash\n";
    for (const auto& r : report.rows) {
        out += fmt::format("{},{},{},{},{:.6f},{:.4f},{:016x}\n", r.lanes, r.worker_count, r.input_lines,
                           r.input_bytes, r.elapsed_seconds, r.speedup_vs_baseline, r.output_hash);
    }
    return out;
}

}  // namespace sessionflow
