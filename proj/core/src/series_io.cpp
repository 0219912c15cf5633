#include "sessionflow/series_io.hpp"

#include "sessionflow/errors.hpp"
#include "sessionflow/timestamp.hpp"

#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace sessionflow {

SeriesFormat parse_series_format(std::string_view text) {
    if (text == "csv") {
        return SeriesFormat::Csv;
    }
    if (text == "json") {
        return SeriesFormat::Json;
    }
    throw Error(ErrorKind::InvalidArgument, fmt::format("unknown output format '{}' (expected csv or json)", text));
}

std::string_view file_extension(SeriesFormat format) noexcept {
    return format == SeriesFormat::Csv ? "csv" : "json";
}

void write_series_csv(std::ostream& out, const BinnedSeries& series) {
    fmt::memory_buffer buf;
    fmt::format_to(std::back_inserter(buf), "bin_start_ms,bin_start_iso8601,count,bytes\n");
    for (const BinEntry& e : series.entries()) {
        fmt::format_to(std::back_inserter(buf), "{},{},{},{}\n", e.key.ms, format_iso8601(e.key.ms), e.value.count,
                       e.value.bytes);
        if (buf.size() > (1u << 20)) {
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void write_series_json(std::ostream& out, const BinnedSeries& series) {
    const BinValue totals = series.totals();
    nlohmann::json bins = nlohmann::json::array();
    for (const BinEntry& e : series.entries()) {
        bins.push_back({{"bin_start_ms", e.key.ms}, {"count", e.value.count}, {"bytes", e.value.bytes}});
    }
    nlohmann::json doc = {
        {"meta",
         {{"bin_width_ms", series.bin_width_ms()}, {"total_count", totals.count}, {"total_bytes", totals.bytes}}},
        {"bins", std::move(bins)},
    };
    out << doc.dump(2) << '\n';
}

void write_series(std::ostream& out, const BinnedSeries& series, SeriesFormat format) {
    if (format == SeriesFormat::Csv) {
        write_series_csv(out, series);
    } else {
        write_series_json(out, series);
    }
}

}  // namespace sessionflow
