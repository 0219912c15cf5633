#include "sessionflow/session_record.hpp"

#include <charconv>
#include <limits>

#include <fmt/format.h>

namespace sessionflow {

namespace {

constexpr std::array<std::string_view, kSessionFieldCount> kFieldNames = {
    "capture_time",     "generated_time",  "start_time",    "elapsed_time",  "source_ip",
    "source_port",      "src_country_code", "destination_ip", "destination_port", "dest_country_code",
    "protocol",         "application",     "subtype",       "action",        "session_end_reason",
    "repeat_count",     "category",        "packets",       "packets_sent",  "packets_received",
    "bytes",            "bytes_sent",      "bytes_received", "device_name",
};

bool parse_u64(std::string_view text, std::uint64_t& out) noexcept {
    if (text.empty() || text.front() < '0' || text.front() > '9') {
        return false;
    }
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

bool parse_port(std::string_view text, std::uint16_t& out) noexcept {
    std::uint64_t v = 0;
    if (!parse_u64(text, v) || v > std::numeric_limits<std::uint16_t>::max()) {
        return false;
    }
    out = static_cast<std::uint16_t>(v);
    return true;
}

std::optional<ErrorKind> assign_field(SessionRecord& r, SessionField field, std::string_view text) noexcept {
    constexpr auto kNumber = ErrorKind::MalformedNumber;
    switch (field) {
    case SessionField::CaptureTime: {
        auto v = try_parse_millis_timestamp(text);
        if (!v) return ErrorKind::MalformedTimestamp;
        r.capture_time = *v;
        return std::nullopt;
    }
    case SessionField::GeneratedTime: {
        auto v = try_parse_seconds_timestamp(text);
        if (!v) return ErrorKind::MalformedTimestamp;
        r.generated_time = *v;
        return std::nullopt;
    }
    case SessionField::StartTime: {
        auto v = try_parse_seconds_timestamp(text);
        if (!v) return ErrorKind::MalformedTimestamp;
        r.start_time = *v;
        return std::nullopt;
    }
    case SessionField::ElapsedTime: return parse_u64(text, r.elapsed_time) ? std::nullopt : std::optional{kNumber};
    case SessionField::SourceIp: {
        auto v = try_parse_ipv4(text);
        if (!v) return ErrorKind::MalformedLine;
        r.source_ip = *v;
        return std::nullopt;
    }
    case SessionField::SourcePort: return parse_port(text, r.source_port) ? std::nullopt : std::optional{kNumber};
    case SessionField::SrcCountryCode: r.src_country_code.assign(text); return std::nullopt;
    case SessionField::DestinationIp: {
        auto v = try_parse_ipv4(text);
        if (!v) return ErrorKind::MalformedLine;
        r.destination_ip = *v;
        return std::nullopt;
    }
    case SessionField::DestinationPort:
        return parse_port(text, r.destination_port) ? std::nullopt : std::optional{kNumber};
    case SessionField::DestCountryCode: r.dest_country_code.assign(text); return std::nullopt;
    case SessionField::Protocol: r.protocol.assign(text); return std::nullopt;
    case SessionField::Application: r.application.assign(text); return std::nullopt;
    case SessionField::Subtype: r.subtype.assign(text); return std::nullopt;
    case SessionField::Action: r.action.assign(text); return std::nullopt;
    case SessionField::SessionEndReason: r.session_end_reason.assign(text); return std::nullopt;
    case SessionField::RepeatCount: return parse_u64(text, r.repeat_count) ? std::nullopt : std::optional{kNumber};
    case SessionField::Category: r.category.assign(text); return std::nullopt;
    case SessionField::Packets: return parse_u64(text, r.packets) ? std::nullopt : std::optional{kNumber};
    case SessionField::PacketsSent: return parse_u64(text, r.packets_sent) ? std::nullopt : std::optional{kNumber};
    case SessionField::PacketsReceived:
        return parse_u64(text, r.packets_received) ? std::nullopt : std::optional{kNumber};
    case SessionField::Bytes: return parse_u64(text, r.bytes) ? std::nullopt : std::optional{kNumber};
    case SessionField::BytesSent: return parse_u64(text, r.bytes_sent) ? std::nullopt : std::optional{kNumber};
    case SessionField::BytesReceived:
        return parse_u64(text, r.bytes_received) ? std::nullopt : std::optional{kNumber};
    case SessionField::DeviceName: r.device_name.assign(text); return std::nullopt;
    }
    return ErrorKind::MalformedLine;
}

void append_u64(std::string& out, std::uint64_t v) {
    char buf[24];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, ptr);
}

void append_ip(std::string& out, Ipv4Addr addr) {
    for (int shift = 24; shift >= 0; shift -= 8) {
        append_u64(out, (addr.value >> shift) & 0xffu);
        if (shift != 0) {
            out.push_back('.');
        }
    }
}

void append_field(std::string& out, const SessionRecord& r, SessionField field) {
    switch (field) {
    case SessionField::CaptureTime: append_millis_timestamp(out, r.capture_time); break;
    case SessionField::GeneratedTime: append_seconds_timestamp(out, r.generated_time); break;
    case SessionField::StartTime: append_seconds_timestamp(out, r.start_time); break;
    case SessionField::ElapsedTime: append_u64(out, r.elapsed_time); break;
    case SessionField::SourceIp: append_ip(out, r.source_ip); break;
    case SessionField::SourcePort: append_u64(out, r.source_port); break;
    case SessionField::SrcCountryCode: out += r.src_country_code; break;
    case SessionField::DestinationIp: append_ip(out, r.destination_ip); break;
    case SessionField::DestinationPort: append_u64(out, r.destination_port); break;
    case SessionField::DestCountryCode: out += r.dest_country_code; break;
    case SessionField::Protocol: out += r.protocol; break;
    case SessionField::Application: out += r.application; break;
    case SessionField::Subtype: out += r.subtype; break;
    case SessionField::Action: out += r.action; break;
    case SessionField::SessionEndReason: out += r.session_end_reason; break;
    case SessionField::RepeatCount: append_u64(out, r.repeat_count); break;
    case SessionField::Category: out += r.category; break;
    case SessionField::Packets: append_u64(out, r.packets); break;
    case SessionField::PacketsSent: append_u64(out, r.packets_sent); break;
    case SessionField::PacketsReceived: append_u64(out, r.packets_received); break;
    case SessionField::Bytes: append_u64(out, r.bytes); break;
    case SessionField::BytesSent: append_u64(out, r.bytes_sent); break;
    case SessionField::BytesReceived: append_u64(out, r.bytes_received); break;
    case SessionField::DeviceName: out += r.device_name; break;
    }
}

}  // namespace

std::string_view field_name(SessionField field) noexcept {
    const auto i = static_cast<std::size_t>(field);
    return i < kFieldNames.size() ? kFieldNames[i] : std::string_view{"unknown"};
}

void FormatSpec::validate() const {
    if (delimiter == '\n' || delimiter == '\r') {
        throw Error(ErrorKind::InvalidArgument, "delimiter must not be a line terminator");
    }
    std::array<bool, kSessionFieldCount> seen{};
    for (SessionField f : columns) {
        const auto i = static_cast<std::size_t>(f);
        if (i >= kSessionFieldCount || seen[i]) {
            throw Error(ErrorKind::InvalidArgument, "column order must be a permutation of the 24 fields");
        }
        seen[i] = true;
    }
}

std::optional<ErrorKind> parse_session_line_into(std::string_view line, const FormatSpec& format,
                                                 SessionRecord& out) noexcept {
    if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
    }
    std::array<std::string_view, kSessionFieldCount> cells;
    std::size_t column = 0;
    std::size_t start = 0;
    while (true) {
        const std::size_t end = line.find(format.delimiter, start);
        if (column == kSessionFieldCount) {
            return ErrorKind::MalformedLine;
        }
        cells[column++] = line.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        if (end == std::string_view::npos) {
            break;
        }
        start = end + 1;
    }
    if (column != kSessionFieldCount) {
        return ErrorKind::MalformedLine;
    }
    for (std::size_t i = 0; i < kSessionFieldCount; ++i) {
        if (auto err = assign_field(out, format.columns[i], cells[i])) {
            return err;
        }
    }
    return std::nullopt;
}

SessionRecord parse_session_line(std::string_view line, const FormatSpec& format, std::uint64_t line_number) {
    SessionRecord record;
    if (auto err = parse_session_line_into(line, format, record)) {
        throw ParseError(*err, line_number, fmt::format("cannot parse session line '{}'", line.substr(0, 120)));
    }
    return record;
}

void append_session_line(std::string& out, const SessionRecord& record, const FormatSpec& format) {
    for (std::size_t i = 0; i < kSessionFieldCount; ++i) {
        if (i != 0) {
            out.push_back(format.delimiter);
        }
        append_field(out, record, format.columns[i]);
    }
}

std::string format_session_line(const SessionRecord& record, const FormatSpec& format) {
    std::string out;
    out.reserve(256);
    append_session_line(out, record, format);
    return out;
}

}  // namespace sessionflow
