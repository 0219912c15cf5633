#pragma once

#include "sessionflow/histogram.hpp"

#include <iosfwd>
#include <string>
#include <string_view>

namespace sessionflow {

enum class SeriesFormat { Csv, Json };

// "csv" or "json"; throws Error(InvalidArgument) otherwise.
SeriesFormat parse_series_format(std::string_view text);
std::string_view file_extension(SeriesFormat format) noexcept;

// Header "bin_start_ms,bin_start_iso8601,count,bytes", one row per bin.
void write_series_csv(std::ostream& out, const BinnedSeries& series);

// {"meta": {"bin_width_ms", "total_count", "total_bytes"},
//  "bins": [{"bin_start_ms", "count", "bytes"}, ...]}
void write_series_json(std::ostream& out, const BinnedSeries& series);

void write_series(std::ostream& out, const BinnedSeries& series, SeriesFormat format);

}  // namespace sessionflow
