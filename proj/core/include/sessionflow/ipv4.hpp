#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace sessionflow {

// IPv4 address as a 32-bit value; the first dotted octet is the most
// significant byte.
struct Ipv4Addr {
    std::uint32_t value = 0;

    constexpr Ipv4Addr() = default;
    constexpr explicit Ipv4Addr(std::uint32_t v) : value(v) {}

    friend constexpr auto operator<=>(Ipv4Addr, Ipv4Addr) = default;
};

// Mask with the top `prefix_len` bits set. prefix_len must be in [0, 32].
constexpr std::uint32_t prefix_mask(int prefix_len) noexcept {
    return prefix_len <= 0 ? 0u : (~std::uint32_t{0} << (32 - prefix_len));
}

struct CidrBlock {
    Ipv4Addr network;
    int prefix_len = 32;

    // Clears host bits below the prefix.
    constexpr CidrBlock normalized() const noexcept {
        return {Ipv4Addr{network.value & prefix_mask(prefix_len)}, prefix_len};
    }

    friend constexpr auto operator<=>(const CidrBlock&, const CidrBlock&) = default;
};

// Throws ParseError(MalformedAddress).
Ipv4Addr parse_ipv4(std::string_view text);
// Non-throwing variant used on hot parse paths.
std::optional<Ipv4Addr> try_parse_ipv4(std::string_view text) noexcept;

std::string format_ipv4(Ipv4Addr addr);

// Parses "a.b.c.d/z" and returns the normalized block. The "/z" suffix is
// mandatory. Throws ParseError(MalformedCidr).
CidrBlock parse_cidr(std::string_view text);

std::string format_cidr(const CidrBlock& block);

}  // namespace sessionflow
