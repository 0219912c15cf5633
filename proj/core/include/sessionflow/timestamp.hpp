#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

// UTC timestamp codecs for session-log columns.
//   capture_time:               "YYYY/MM/DD HH:MM:SS.mmm"  -> epoch milliseconds
//   generated_time, start_time: "YYYY/MM/DD HH:MM:SS"      -> epoch seconds
namespace sessionflow {

using EpochMillis = std::int64_t;
using EpochSeconds = std::int64_t;

std::optional<EpochMillis> try_parse_millis_timestamp(std::string_view text) noexcept;
std::optional<EpochSeconds> try_parse_seconds_timestamp(std::string_view text) noexcept;

std::string format_millis_timestamp(EpochMillis ms);
std::string format_seconds_timestamp(EpochSeconds s);

// "YYYY-MM-DDTHH:MM:SS.mmmZ"
std::string format_iso8601(EpochMillis ms);

// Appends the formatted forms to `out` without allocating a temporary.
void append_millis_timestamp(std::string& out, EpochMillis ms);
void append_seconds_timestamp(std::string& out, EpochSeconds s);

// Floor division that rounds toward negative infinity for pre-1970 values.
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) noexcept {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
        --q;
    }
    return q;
}

}  // namespace sessionflow
