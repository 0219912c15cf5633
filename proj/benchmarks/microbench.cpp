#include "sessionflow/discriminator.hpp"
#include "sessionflow/generator.hpp"
#include "sessionflow/histogram.hpp"
#include "sessionflow/session_record.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace sessionflow;

const HomeNetwork& home() {
    static const HomeNetwork h(std::vector<CidrBlock>{parse_cidr("10.0.0.0/8"), parse_cidr("133.1.0.0/16"),
                                           parse_cidr("150.99.0.0/16"), parse_cidr("192.168.0.0/16")});
    return h;
}

std::vector<std::string> sample_lines(std::size_t n) {
    GeneratorConfig cfg;
    cfg.record_count = n;
    cfg.seed = 5;
    std::ostringstream out;
    generate_sessions(out, home(), cfg);
    std::vector<std::string> lines;
    std::istringstream in(out.str());
    for (std::string line; std::getline(in, line);) {
        lines.push_back(line);
    }
    return lines;
}

std::vector<SessionRecord> sample_records(std::size_t n) {
    std::vector<SessionRecord> records;
    for (const auto& line : sample_lines(n)) {
        records.push_back(parse_session_line(line));
    }
    return records;
}

void BM_ParseSessionLine(benchmark::State& state) {
    const auto lines = sample_lines(4096);
    const FormatSpec format;
    SessionRecord record;
    std::size_t i = 0;
    std::size_t bytes = 0;
    for (auto _ : state) {
        const auto& line = lines[i++ % lines.size()];
        benchmark::DoNotOptimize(parse_session_line_into(line, format, record));
        bytes += line.size();
    }
    state.SetItemsProcessed(state.iterations());
    state.SetBytesProcessed(static_cast<std::int64_t>(bytes));
}
BENCHMARK(BM_ParseSessionLine);

void BM_DiscriminateLanes(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::vector<Ipv4Addr> sources(static_cast<std::size_t>(state.range(0)));
    for (auto& s : sources) {
        s = Ipv4Addr{static_cast<std::uint32_t>(rng())};
    }
    std::vector<DirectionTag> tags(sources.size());
    for (auto _ : state) {
        discriminate_lanes(sources, home(), tags);
        benchmark::DoNotOptimize(tags.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DiscriminateLanes)->Arg(1 << 10)->Arg(1 << 16);

void BM_ReduceTile(benchmark::State& state) {
    const auto records = sample_records(static_cast<std::size_t>(state.range(0)));
    const auto pairs = map_records(records, 1000);
    for (auto _ : state) {
        benchmark::DoNotOptimize(reduce_tile(pairs, 1000));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ReduceTile)->Arg(1000)->Arg(4096)->Arg(65536);

void BM_MergeScatter(benchmark::State& state) {
    const auto records = sample_records(1 << 16);
    const auto pairs = map_records(records, 1000);
    const std::size_t parts = static_cast<std::size_t>(state.range(0));
    std::vector<BinnedSeries> partials;
    const std::size_t step = (pairs.size() + parts - 1) / parts;
    for (std::size_t off = 0; off < pairs.size(); off += step) {
        partials.push_back(reduce_tile(std::span(pairs).subspan(off, std::min(step, pairs.size() - off)), 1000));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(merge_scatter(partials));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pairs.size()));
}
BENCHMARK(BM_MergeScatter)->Arg(2)->Arg(16)->Arg(128);

}  // namespace
BENCHMARK_MAIN();
