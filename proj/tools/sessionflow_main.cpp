// sessionflow: session-log direction discrimination and time-series
// histogramming.
//
//   sessionflow run      --input logs/ --home-net home.txt [--watchlist list.txt ...] --out-dir out/
//   sessionflow generate --count 100000 --home-net home.txt --diurnal --seed 7 --out day.csv
//   sessionflow bench    --input day.csv --home-net home.txt --lane-sweep 1,4 --reps 3

#include "sessionflow/commands.hpp"
#include "sessionflow/errors.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <fmt/format.h>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

std::atomic<bool> g_cancel{false};

extern "C" void on_signal(int) {
    g_cancel.store(true);
}

void add_run_options(CLI::App& cmd, sessionflow::RunConfig& cfg, std::string& format) {
    cmd.add_option("--input", cfg.input_paths, "Session-log files or directories")->required();
    cmd.add_option("--home-net", cfg.home_network_path, "Home-network CIDR list (one per line)")->required();
    cmd.add_option("--watchlist", cfg.watchlist_paths, "IP watchlist file (repeatable)");
    cmd.add_option("--bin-width-ms", cfg.bin_width_ms, "Histogram bin width in ms")->capture_default_str();
    cmd.add_option("--report-width-ms", cfg.report_width_ms, "Reporting bin width in ms")->capture_default_str();
    cmd.add_option("--workers", cfg.worker_count, "Chunk worker threads")->capture_default_str();
    cmd.add_option("--lanes", cfg.lanes, "Stage-1 reducer lanes")->capture_default_str();
    cmd.add_option("--tile-size", cfg.tile_size, "Records per stage-1 tile")->capture_default_str();
    cmd.add_option("--chunk-bytes", cfg.target_chunk_bytes, "Target chunk size in bytes")->capture_default_str();
    cmd.add_option("--out-dir", cfg.output_dir, "Output directory")->capture_default_str();
    cmd.add_option("--format", format, "Series output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd.add_flag("--header", cfg.format.has_header, "Input files start with a header line");
}

sessionflow::EpochMillis parse_day_start(const std::string& text) {
    if (auto s = sessionflow::try_parse_seconds_timestamp(text + " 00:00:00")) {
        return *s * 1000;
    }
    throw CLI::ValidationError("--day-start", "expected YYYY/MM/DD, got '" + text + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Session-log direction discrimination and time-series histogramming"};
    app.require_subcommand(1);

    sessionflow::RunConfig run_cfg;
    std::string run_format = "csv";
    CLI::App* run = app.add_subcommand("run", "Discriminate and histogram session logs");
    add_run_options(*run, run_cfg, run_format);

    sessionflow::GeneratorConfig gen_cfg;
    std::string gen_home;
    std::string gen_out;
    std::string gen_day = "2018/01/01";
    CLI::App* gen = app.add_subcommand("generate", "Write a synthetic session log for one day");
    gen->add_option("--count", gen_cfg.record_count, "Number of sessions")->required();
    gen->add_option("--home-net", gen_home, "Home-network CIDR list")->required();
    gen->add_option("--out", gen_out, "Output file")->required();
    gen->add_option("--inside-fraction", gen_cfg.inside_fraction, "Share of sources inside the home network")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    gen->add_flag("--diurnal", gen_cfg.diurnal, "Shape hourly rates with a mid-day peak");
    gen->add_option("--seed", gen_cfg.seed, "RNG seed")->capture_default_str();
    gen->add_option("--day-start", gen_day, "UTC day to generate (YYYY/MM/DD)")->capture_default_str();

    sessionflow::RunConfig bench_cfg;
    std::string bench_format = "csv";
    std::vector<std::size_t> lane_sweep{1, 4};
    std::size_t reps = 3;
    bool bench_out_set = false;
    CLI::App* bench = app.add_subcommand("bench", "Time the pipeline across lane counts");
    add_run_options(*bench, bench_cfg, bench_format);
    bench->add_option("--lane-sweep", lane_sweep, "Lane counts to time")->delimiter(',')->capture_default_str();
    bench->add_option("--reps", reps, "Repetitions per configuration (median is reported)")->capture_default_str();

    try {
        app.parse(argc, argv);
        run_cfg.output_format = sessionflow::parse_series_format(run_format);
        bench_cfg.output_format = sessionflow::parse_series_format(bench_format);
        if (gen->parsed()) {
            gen_cfg.day_start_ms = parse_day_start(gen_day);
        }
        bench_out_set = bench->count("--out-dir") > 0;
        if (run->parsed()) {
            run_cfg.validate();
        }
        if (bench->parsed()) {
            bench_cfg.validate();
        }
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    } catch (const sessionflow::Error& e) {
        std::cerr << "sessionflow: " << e.what() << '\n';
        return kExitUsage;
    }

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    run_cfg.cancel = &g_cancel;
    bench_cfg.cancel = &g_cancel;

    try {
        if (run->parsed()) {
            sessionflow::cmd_run(run_cfg, std::cout);
        } else if (gen->parsed()) {
            sessionflow::cmd_generate(gen_home, gen_cfg, gen_out);
            std::cout << fmt::format("wrote {} sessions to {}\n", gen_cfg.record_count, gen_out);
        } else if (bench->parsed()) {
            const auto report = sessionflow::cmd_bench(bench_cfg, lane_sweep, reps, std::cerr);
            std::cout << sessionflow::format_bench_table(report) << '\n' << sessionflow::format_bench_csv(report);
            if (bench_out_set) {
                std::filesystem::create_directories(bench_cfg.output_dir);
                std::ofstream out(bench_cfg.output_dir + "/bench.csv");
                out << sessionflow::format_bench_csv(report);
            }
        }
    } catch (const sessionflow::Error& e) {
        std::cerr << "sessionflow: " << e.what() << '\n';
        return e.kind() == sessionflow::ErrorKind::InvalidArgument ? kExitUsage : kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "sessionflow: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}
