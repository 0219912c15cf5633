#include "sessionflow/commands.hpp"
#include "sessionflow/errors.hpp"
#include "sessionflow/series_io.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <sstream>

namespace sessionflow {
namespace {

namespace fs = std::filesystem;

// 20 sessions on 2018/01/01 across three hours. Home is 10.0.0.0/8.
// Hand counts:
//   outgoing 00:00 -> 6 sessions, 600 bytes; 01:00 -> 4, 4000; 02:00 -> 1, 7
//   ingoing  00:00 -> 3, 30;  01:00 -> 5, 5;  02:00 -> 1, 1000
// The watchlist holds 198.51.100.7, seen in 4 sessions (3 ingoing at 00:00
// as source, 1 outgoing at 02:00 as destination).
std::string fixture_log() {
    std::string text;
    auto add = [&](const char* t, const char* s, const char* d, std::uint64_t b) {
        text += testing::sample_line(t, s, d, b) + "\n";
    };
    for (int i = 0; i < 6; ++i) {
        add("2018/01/01 00:10:00.000", "10.0.0.1", "93.184.216.34", 100);
    }
    add("2018/01/01 00:59:59.999", "198.51.100.7", "10.0.0.2", 10);
    add("2018/01/01 00:00:00.000", "198.51.100.7", "10.0.0.3", 10);
    add("2018/01/01 00:30:00.000", "198.51.100.7", "10.0.0.3", 10);
    for (int i = 0; i < 4; ++i) {
        add("2018/01/01 01:15:00.500", "10.9.9.9", "8.8.8.8", 1000);
    }
    for (int i = 0; i < 5; ++i) {
        add("2018/01/01 01:45:00.000", "8.8.4.4", "10.1.2.3", 1);
    }
    add("2018/01/01 02:00:00.000", "10.7.7.7", "198.51.100.7", 7);
    add("2018/01/01 02:59:59.999", "1.1.1.1", "10.7.7.7", 1000);
    return text;
}

class CommandsTest : public ::testing::Test {
protected:
    void SetUp() override {
        testing::write_text(dir_.file("home.txt"), "# corporate\n10.0.0.0/8\n");
        testing::write_text(dir_.file("abuse.txt"), "198.51.100.7\n");
        fs::create_directories(dir_.path() / "logs");
        testing::write_text(dir_.file("logs/day.log"), fixture_log());
        config_.input_paths = {dir_.file("logs")};
        config_.home_network_path = dir_.file("home.txt");
        config_.watchlist_paths = {dir_.file("abuse.txt")};
        config_.output_dir = dir_.file("out");
    }

    testing::TempDir dir_;
    RunConfig config_;
};

TEST_F(CommandsTest, HandCountedFixture) {
    std::ostringstream log;
    const RunSummary summary = cmd_run(config_, log);
    EXPECT_EQ(summary.records_read, 20u);
    EXPECT_EQ(summary.malformed_skipped, 0u);

    const std::string out = testing::read_text(dir_.file("out/outgoing.csv"));
    EXPECT_EQ(out,
              "bin_start_ms,bin_start_iso8601,count,bytes\n"
              "1514764800000,2018-01-01T00:00:00.000Z,6,600\n"
              "1514768400000,2018-01-01T01:00:00.000Z,4,4000\n"
              "1514772000000,2018-01-01T02:00:00.000Z,1,7\n");
    const std::string in = testing::read_text(dir_.file("out/ingoing.csv"));
    EXPECT_EQ(in,
              "bin_start_ms,bin_start_iso8601,count,bytes\n"
              "1514764800000,2018-01-01T00:00:00.000Z,3,30\n"
              "1514768400000,2018-01-01T01:00:00.000Z,5,5\n"
              "1514772000000,2018-01-01T02:00:00.000Z,1,1000\n");
    EXPECT_EQ(testing::read_text(dir_.file("out/abuse.ingoing.csv")),
              "bin_start_ms,bin_start_iso8601,count,bytes\n"
              "1514764800000,2018-01-01T00:00:00.000Z,3,30\n");
    EXPECT_EQ(testing::read_text(dir_.file("out/abuse.outgoing.csv")),
              "bin_start_ms,bin_start_iso8601,count,bytes\n"
              "1514772000000,2018-01-01T02:00:00.000Z,1,7\n");

    ASSERT_EQ(summary.series.size(), 4u);
    EXPECT_EQ(summary.series[0].label, "outgoing");
    EXPECT_EQ(summary.series[0].totals, (BinValue{11, 4607}));
    EXPECT_NE(log.str().find("records_read=20"), std::string::npos);
    EXPECT_NE(log.str().find("abuse.outgoing: count=1 bytes=7"), std::string::npos);
}

TEST_F(CommandsTest, RerunsAreByteIdenticalAcrossConfigurations) {
    std::ostringstream log;
    config_.bin_width_ms = 1;
    config_.report_width_ms = 600'000;
    cmd_run(config_, log);
    const std::string first = testing::read_text(dir_.file("out/outgoing.csv"));
    config_.output_dir = dir_.file("out2");
    config_.lanes = 4;
    config_.worker_count = 3;
    config_.tile_size = 1;
    config_.target_chunk_bytes = 97;
    cmd_run(config_, log);
    EXPECT_EQ(testing::read_text(dir_.file("out2/outgoing.csv")), first);
}

TEST_F(CommandsTest, JsonOutput) {
    config_.output_format = SeriesFormat::Json;
    std::ostringstream log;
    cmd_run(config_, log);
    const auto doc = nlohmann::json::parse(testing::read_text(dir_.file("out/ingoing.json")));
    EXPECT_EQ(doc["meta"]["bin_width_ms"], kOneHourMs);
    EXPECT_EQ(doc["meta"]["total_count"], 9);
    EXPECT_EQ(doc["meta"]["total_bytes"], 1035);
    ASSERT_EQ(doc["bins"].size(), 3u);
    EXPECT_EQ(doc["bins"][2]["bin_start_ms"], 1514772000000LL);
    EXPECT_EQ(doc["bins"][2]["bytes"], 1000);
}

TEST_F(CommandsTest, MissingHomeNetworkNamesThePathAndWritesNothing) {
    config_.home_network_path = dir_.file("nope.txt");
    std::ostringstream log;
    try {
        cmd_run(config_, log);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::FileNotReadable);
        EXPECT_NE(std::string(e.what()).find("nope.txt"), std::string::npos);
    }
    EXPECT_FALSE(fs::exists(dir_.file("out/outgoing.csv")));
}

TEST_F(CommandsTest, ValidatesConfiguration) {
    std::ostringstream log;
    RunConfig bad = config_;
    bad.report_width_ms = 1000;
    bad.bin_width_ms = 300;
    EXPECT_THROW(cmd_run(bad, log), Error);
    bad = config_;
    bad.lanes = 0;
    EXPECT_THROW(cmd_run(bad, log), Error);
    bad = config_;
    testing::write_text(dir_.file("outgoing.txt"), "1.2.3.4\n");
    bad.watchlist_paths = {dir_.file("outgoing.txt")};
    EXPECT_THROW(cmd_run(bad, log), Error);
}

TEST_F(CommandsTest, GenerateIsSeededAndReparses) {
    GeneratorConfig cfg;
    cfg.record_count = 0;
    cmd_generate(config_.home_network_path, cfg, dir_.file("empty.log"));
    EXPECT_EQ(testing::read_text(dir_.file("empty.log")), "");

    cfg.record_count = 5000;
    cfg.seed = 9;
    cfg.diurnal = true;
    cmd_generate(config_.home_network_path, cfg, dir_.file("a.log"));
    cmd_generate(config_.home_network_path, cfg, dir_.file("b.log"));
    EXPECT_EQ(testing::read_text(dir_.file("a.log")), testing::read_text(dir_.file("b.log")));
    cfg.seed = 10;
    cmd_generate(config_.home_network_path, cfg, dir_.file("c.log"));
    EXPECT_NE(testing::read_text(dir_.file("a.log")), testing::read_text(dir_.file("c.log")));

    RunConfig run = config_;
    run.input_paths = {dir_.file("a.log")};
    run.watchlist_paths.clear();
    std::ostringstream log;
    const RunSummary s = cmd_run(run, log);
    EXPECT_EQ(s.records_read, 5000u);
    EXPECT_EQ(s.malformed_skipped, 0u);
}

TEST_F(CommandsTest, GenerateAllInsideLeavesIngoingEmpty) {
    GeneratorConfig cfg;
    cfg.record_count = 300;
    cfg.inside_fraction = 1.0;
    cmd_generate(config_.home_network_path, cfg, dir_.file("inside.log"));
    RunConfig run = config_;
    run.input_paths = {dir_.file("inside.log")};
    std::ostringstream log;
    const RunSummary s = cmd_run(run, log);
    EXPECT_EQ(s.series[0].totals.count, 300u);
    EXPECT_EQ(s.series[1].totals.count, 0u);
    EXPECT_EQ(testing::read_text(dir_.file("out/ingoing.csv")), "bin_start_ms,bin_start_iso8601,count,bytes\n");
}

TEST_F(CommandsTest, BenchBaselineOnly) {
    std::ostringstream warn;
    const BenchReport report = cmd_bench(config_, {1}, 3, warn);
    ASSERT_EQ(report.rows.size(), 1u);
    EXPECT_EQ(report.rows[0].lanes, 1u);
    EXPECT_EQ(report.rows[0].input_lines, 20u);
    EXPECT_DOUBLE_EQ(report.rows[0].speedup_vs_baseline, 1.0);
    EXPECT_NE(warn.str().find("warning"), std::string::npos);
    EXPECT_NE(format_bench_csv(report).find("1,1,20,"), std::string::npos);
}

TEST_F(CommandsTest, BenchSweepAddsBaselineAndAgrees) {
    std::ostringstream warn;
    const BenchReport report = cmd_bench(config_, {4, 2}, 1, warn);
    ASSERT_EQ(report.rows.size(), 3u);
    EXPECT_EQ(report.rows[0].lanes, 1u);
    for (const auto& r : report.rows) {
        EXPECT_EQ(r.output_hash, report.rows[0].output_hash);
        EXPECT_EQ(r.worker_count, r.lanes);
    }
}

TEST(Median, OddAndEven) {
    EXPECT_DOUBLE_EQ(median({3.0, 1.0, 2.0}), 2.0);
    EXPECT_DOUBLE_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
}

TEST(SeriesIo, CsvAndFormatParsing) {
    const auto s = BinnedSeries::from_entries(600'000, {{BinKey{-600'000}, {2, 3}}, {BinKey{0}, {1, 1}}});
    std::ostringstream csv;
    write_series_csv(csv, s);
    EXPECT_EQ(csv.str(),
              "bin_start_ms,bin_start_iso8601,count,bytes\n"
              "-600000,1969-12-31T23:50:00.000Z,2,3\n"
              "0,1970-01-01T00:00:00.000Z,1,1\n");
    EXPECT_EQ(parse_series_format("json"), SeriesFormat::Json);
    EXPECT_EQ(file_extension(SeriesFormat::Csv), "csv");
    EXPECT_THROW(parse_series_format("xml"), Error);
}

}  // namespace
}  // namespace sessionflow
