#include "sessionflow/timestamp.hpp"

#include <chrono>

namespace sessionflow {

namespace {

using namespace std::chrono;

struct CivilTime {
    int year;
    unsigned month;
    unsigned day;
    int hour;
    int minute;
    int second;
};

bool read_digits(std::string_view text, std::size_t pos, std::size_t count, int& out) noexcept {
    int v = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const char c = text[pos + i];
        if (c < '0' || c > '9') {
            return false;
        }
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

// Parses the fixed-width "YYYY/MM/DD HH:MM:SS" prefix.
std::optional<EpochSeconds> parse_civil_seconds(std::string_view text) noexcept {
    if (text.size() < 19 || text[4] != '/' || text[7] != '/' || text[10] != ' ' || text[13] != ':' ||
        text[16] != ':') {
        return std::nullopt;
    }
    int y, mo, d, h, mi, s;
    if (!read_digits(text, 0, 4, y) || !read_digits(text, 5, 2, mo) || !read_digits(text, 8, 2, d) ||
        !read_digits(text, 11, 2, h) || !read_digits(text, 14, 2, mi) || !read_digits(text, 17, 2, s)) {
        return std::nullopt;
    }
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || s > 59) {
        return std::nullopt;
    }
    const auto days_since_epoch = sys_days{ymd}.time_since_epoch().count();
    return static_cast<EpochSeconds>(days_since_epoch) * 86400 + h * 3600 + mi * 60 + s;
}

CivilTime to_civil(EpochSeconds s) noexcept {
    const std::int64_t days = floor_div(s, 86400);
    const std::int64_t secs_of_day = s - days * 86400;
    const year_month_day ymd{sys_days{std::chrono::days{days}}};
    return {static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
            static_cast<int>(secs_of_day / 3600), static_cast<int>((secs_of_day / 60) % 60),
            static_cast<int>(secs_of_day % 60)};
}

void put_digits(std::string& out, int value, int width) {
    char buf[8];
    for (int i = width - 1; i >= 0; --i) {
        buf[i] = static_cast<char>('0' + value % 10);
        value /= 10;
    }
    out.append(buf, static_cast<std::size_t>(width));
}

void append_civil(std::string& out, const CivilTime& t, char date_sep, char time_sep) {
    put_digits(out, t.year, 4);
    out.push_back(date_sep);
    put_digits(out, static_cast<int>(t.month), 2);
    out.push_back(date_sep);
    put_digits(out, static_cast<int>(t.day), 2);
    out.push_back(time_sep);
    put_digits(out, t.hour, 2);
    out.push_back(':');
    put_digits(out, t.minute, 2);
    out.push_back(':');
    put_digits(out, t.second, 2);
}

}  // namespace

std::optional<EpochMillis> try_parse_millis_timestamp(std::string_view text) noexcept {
    if (text.size() != 23 || text[19] != '.') {
        return std::nullopt;
    }
    auto secs = parse_civil_seconds(text);
    int ms = 0;
    if (!secs || !read_digits(text, 20, 3, ms)) {
        return std::nullopt;
    }
    return *secs * 1000 + ms;
}

std::optional<EpochSeconds> try_parse_seconds_timestamp(std::string_view text) noexcept {
    if (text.size() != 19) {
        return std::nullopt;
    }
    return parse_civil_seconds(text);
}

void append_millis_timestamp(std::string& out, EpochMillis ms) {
    const EpochSeconds s = floor_div(ms, 1000);
    append_civil(out, to_civil(s), '/', ' ');
    out.push_back('.');
    put_digits(out, static_cast<int>(ms - s * 1000), 3);
}

void append_seconds_timestamp(std::string& out, EpochSeconds s) {
    append_civil(out, to_civil(s), '/', ' ');
}

std::string format_millis_timestamp(EpochMillis ms) {
    std::string out;
    append_millis_timestamp(out, ms);
    return out;
}

std::string format_seconds_timestamp(EpochSeconds s) {
    std::string out;
    append_seconds_timestamp(out, s);
    return out;
}

std::string format_iso8601(EpochMillis ms) {
    const EpochSeconds s = floor_div(ms, 1000);
    std::string out;
    append_civil(out, to_civil(s), '-', 'T');
    out.push_back('.');
    put_digits(out, static_cast<int>(ms - s * 1000), 3);
    out.push_back('Z');
    return out;
}

}  // namespace sessionflow
