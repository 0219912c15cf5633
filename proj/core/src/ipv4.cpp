#include "sessionflow/ipv4.hpp"

#include "sessionflow/errors.hpp"

#include <charconv>

#include <fmt/format.h>

namespace sessionflow {

namespace {

// Accepts 1-3 decimal digits with value <= 255. Leading zeros are tolerated
// ("010" is 10); signs and whitespace are not.
bool parse_octet(std::string_view text, std::uint32_t& out) noexcept {
    if (text.empty() || text.size() > 3) {
        return false;
    }
    std::uint32_t v = 0;
    for (char c : text) {
        if (c < '0' || c > '9') {
            return false;
        }
        v = v * 10 + static_cast<std::uint32_t>(c - '0');
    }
    if (v > 255) {
        return false;
    }
    out = v;
    return true;
}

}  // namespace

std::optional<Ipv4Addr> try_parse_ipv4(std::string_view text) noexcept {
    std::uint32_t value = 0;
    for (int i = 0; i < 4; ++i) {
        std::size_t dot = text.find('.');
        if ((i < 3) == (dot == std::string_view::npos)) {
            return std::nullopt;
        }
        std::string_view part = text.substr(0, dot);
        std::uint32_t octet = 0;
        if (!parse_octet(part, octet)) {
            return std::nullopt;
        }
        value = (value << 8) | octet;
        text = (i < 3) ? text.substr(dot + 1) : std::string_view{};
    }
    return Ipv4Addr{value};
}

Ipv4Addr parse_ipv4(std::string_view text) {
    if (auto addr = try_parse_ipv4(text)) {
        return *addr;
    }
    throw ParseError(ErrorKind::MalformedAddress, 0, fmt::format("not a dotted quad: '{}'", text));
}

std::string format_ipv4(Ipv4Addr addr) {
    const std::uint32_t v = addr.value;
    return fmt::format("{}.{}.{}.{}", v >> 24, (v >> 16) & 0xffu, (v >> 8) & 0xffu, v & 0xffu);
}

CidrBlock parse_cidr(std::string_view text) {
    const std::size_t slash = text.find('/');
    if (slash == std::string_view::npos) {
        throw ParseError(ErrorKind::MalformedCidr, 0, fmt::format("missing '/<prefix>' in '{}'", text));
    }
    auto addr = try_parse_ipv4(text.substr(0, slash));
    if (!addr) {
        throw ParseError(ErrorKind::MalformedCidr, 0, fmt::format("bad network address in '{}'", text));
    }
    std::string_view len_text = text.substr(slash + 1);
    const bool digits_only = !len_text.empty() && len_text.size() <= 2 &&
                             len_text.find_first_not_of("0123456789") == std::string_view::npos;
    int len = -1;
    if (digits_only) {
        std::from_chars(len_text.data(), len_text.data() + len_text.size(), len);
    }
    if (len < 0 || len > 32) {
        throw ParseError(ErrorKind::MalformedCidr, 0, fmt::format("prefix length out of [0,32] in '{}'", text));
    }
    return CidrBlock{*addr, len}.normalized();
}

std::string format_cidr(const CidrBlock& block) {
    return fmt::format("{}/{}", format_ipv4(block.network), block.prefix_len);
}

}  // namespace sessionflow
