#pragma once

#include "sessionflow/ingest.hpp"
#include "sessionflow/ipv4.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sessionflow {

enum class DirectionTag : std::uint8_t { Outgoing, Ingoing };

std::string_view to_string(DirectionTag tag) noexcept;

// The set of address blocks that make up the home network. Blocks are
// normalized and deduplicated on construction; the list is never empty.
class HomeNetwork {
public:
    // Throws Error(EmptyHomeNetwork) for an empty list.
    explicit HomeNetwork(std::vector<CidrBlock> blocks);

    std::span<const CidrBlock> blocks() const noexcept { return blocks_; }

private:
    std::vector<CidrBlock> blocks_;
};

// One CIDR per line; '#' starts a comment; blank lines are ignored.
// Throws ParseError(MalformedCidr) with the line number, Error(FileNotReadable),
// or Error(EmptyHomeNetwork).
HomeNetwork load_home_network(const std::string& path);
HomeNetwork parse_home_network(std::string_view text);

// Clears the low (32 - prefix_len) bits. prefix_len must be in [0, 32].
constexpr std::uint32_t bitmask(Ipv4Addr addr, int prefix_len) noexcept {
    return addr.value & prefix_mask(prefix_len);
}

// Outgoing when the masked source address equals the network address of
// any home block, Ingoing otherwise.
DirectionTag discriminate_one(Ipv4Addr source_ip, const HomeNetwork& home) noexcept;

// Tags a contiguous run of source addresses, processing them in fixed-width
// lanes. `tags.size()` must equal `sources.size()`.
void discriminate_lanes(std::span<const Ipv4Addr> sources, const HomeNetwork& home, std::span<DirectionTag> tags);

struct DirectionalBatches {
    RecordBatch outgoing;
    RecordBatch ingoing;
};

// Stable partition of a batch by direction. Both outputs carry the input's
// chunk ordinal and a malformed_count of zero.
DirectionalBatches discriminate_batch(RecordBatch batch, const HomeNetwork& home);

}  // namespace sessionflow
