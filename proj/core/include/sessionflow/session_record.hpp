#pragma once

#include "sessionflow/ipv4.hpp"
#include "sessionflow/errors.hpp"
#include "sessionflow/timestamp.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace sessionflow {

// One firewall session export row (PA-7080 layout, 24 columns).
struct SessionRecord {
    EpochMillis capture_time = 0;
    EpochSeconds generated_time = 0;
    EpochSeconds start_time = 0;
    std::uint64_t elapsed_time = 0;
    Ipv4Addr source_ip;
    std::uint16_t source_port = 0;
    std::string src_country_code;
    Ipv4Addr destination_ip;
    std::uint16_t destination_port = 0;
    std::string dest_country_code;
    std::string protocol;
    std::string application;
    std::string subtype;
    std::string action;
    std::string session_end_reason;
    std::uint64_t repeat_count = 0;
    std::string category;
    std::uint64_t packets = 0;
    std::uint64_t packets_sent = 0;
    std::uint64_t packets_received = 0;
    std::uint64_t bytes = 0;
    std::uint64_t bytes_sent = 0;
    std::uint64_t bytes_received = 0;
    std::string device_name;

    friend bool operator==(const SessionRecord&, const SessionRecord&) = default;
};

// Column identities in canonical export order.
enum class SessionField : std::uint8_t {
    CaptureTime,
    GeneratedTime,
    StartTime,
    ElapsedTime,
    SourceIp,
    SourcePort,
    SrcCountryCode,
    DestinationIp,
    DestinationPort,
    DestCountryCode,
    Protocol,
    Application,
    Subtype,
    Action,
    SessionEndReason,
    RepeatCount,
    Category,
    Packets,
    PacketsSent,
    PacketsReceived,
    Bytes,
    BytesSent,
    BytesReceived,
    DeviceName,
};

inline constexpr std::size_t kSessionFieldCount = 24;

std::string_view field_name(SessionField field) noexcept;

struct FormatSpec {
    char delimiter = ',';
    // columns[i] is the field stored in the i-th delimited column.
    std::array<SessionField, kSessionFieldCount> columns = canonical_columns();
    // First line of every file is a header and is skipped.
    bool has_header = false;

    static constexpr std::array<SessionField, kSessionFieldCount> canonical_columns() noexcept {
        std::array<SessionField, kSessionFieldCount> cols{};
        for (std::size_t i = 0; i < kSessionFieldCount; ++i) {
            cols[i] = static_cast<SessionField>(i);
        }
        return cols;
    }

    // Throws Error(InvalidArgument) unless `columns` is a permutation and the
    // delimiter is not a newline.
    void validate() const;
};

// Non-throwing core of the parser. Returns nullopt on success or the error
// kind; `out` is unspecified on failure.
std::optional<ErrorKind> parse_session_line_into(std::string_view line, const FormatSpec& format,
                                                 SessionRecord& out) noexcept;

// Throws ParseError carrying `line_number` (pass 0 if unknown).
SessionRecord parse_session_line(std::string_view line, const FormatSpec& format = {},
                                 std::uint64_t line_number = 0);

// Appends the record as one delimited line, without a trailing newline.
void append_session_line(std::string& out, const SessionRecord& record, const FormatSpec& format = {});
std::string format_session_line(const SessionRecord& record, const FormatSpec& format = {});

}  // namespace sessionflow
