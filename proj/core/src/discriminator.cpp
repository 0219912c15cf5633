#include "sessionflow/discriminator.hpp"

#include "sessionflow/errors.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace sessionflow {

namespace {

constexpr std::size_t kLaneWidth = 8;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

std::string_view to_string(DirectionTag tag) noexcept {
    return tag == DirectionTag::Outgoing ? "outgoing" : "ingoing";
}

HomeNetwork::HomeNetwork(std::vector<CidrBlock> blocks) : blocks_(std::move(blocks)) {
    if (blocks_.empty()) {
        throw Error(ErrorKind::EmptyHomeNetwork, "home network must contain at least one CIDR block");
    }
    for (auto& b : blocks_) {
        if (b.prefix_len < 0 || b.prefix_len > 32) {
            throw Error(ErrorKind::MalformedCidr, fmt::format("prefix length {} out of [0,32]", b.prefix_len));
        }
        b = b.normalized();
    }
    // Dedup while keeping first-seen order.
    std::vector<CidrBlock> unique;
    unique.reserve(blocks_.size());
    for (const auto& b : blocks_) {
        if (std::find(unique.begin(), unique.end(), b) == unique.end()) {
            unique.push_back(b);
        }
    }
    blocks_ = std::move(unique);
}

HomeNetwork parse_home_network(std::string_view text) {
    std::vector<CidrBlock> blocks;
    std::uint64_t line_number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            nl = text.size();
        }
        ++line_number;
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        try {
            blocks.push_back(parse_cidr(line));
        } catch (const ParseError&) {
            throw ParseError(ErrorKind::MalformedCidr, line_number, fmt::format("'{}'", line));
        }
    }
    return HomeNetwork(std::move(blocks));
}

HomeNetwork load_home_network(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::FileNotReadable, fmt::format("cannot read home-network file '{}'", path));
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_home_network(ss.str());
}

DirectionTag discriminate_one(Ipv4Addr source_ip, const HomeNetwork& home) noexcept {
    for (const CidrBlock& block : home.blocks()) {
        const std::uint32_t source_bits = bitmask(source_ip, block.prefix_len);
        const std::uint32_t home_bits = block.network.value;
        if (source_bits - home_bits == 0) {
            return DirectionTag::Outgoing;
        }
    }
    return DirectionTag::Ingoing;
}

void discriminate_lanes(std::span<const Ipv4Addr> sources, const HomeNetwork& home, std::span<DirectionTag> tags) {
    const std::size_t n = sources.size();
    std::size_t i = 0;
    for (; i + kLaneWidth <= n; i += kLaneWidth) {
        std::array<std::uint32_t, kLaneWidth> matched{};
        for (const CidrBlock& block : home.blocks()) {
            const std::uint32_t mask = prefix_mask(block.prefix_len);
            for (std::size_t lane = 0; lane < kLaneWidth; ++lane) {
                matched[lane] |= static_cast<std::uint32_t>(((sources[i + lane].value & mask) - block.network.value) == 0);
            }
        }
        for (std::size_t lane = 0; lane < kLaneWidth; ++lane) {
            tags[i + lane] = matched[lane] != 0 ? DirectionTag::Outgoing : DirectionTag::Ingoing;
        }
    }
    for (; i < n; ++i) {
        tags[i] = discriminate_one(sources[i], home);
    }
}

DirectionalBatches discriminate_batch(RecordBatch batch, const HomeNetwork& home) {
    const std::size_t n = batch.records.size();
    std::vector<Ipv4Addr> sources(n);
    for (std::size_t i = 0; i < n; ++i) {
        sources[i] = batch.records[i].source_ip;
    }
    std::vector<DirectionTag> tags(n);
    discriminate_lanes(sources, home, tags);

    const auto outgoing_count =
        static_cast<std::size_t>(std::count(tags.begin(), tags.end(), DirectionTag::Outgoing));
    DirectionalBatches out;
    out.outgoing.chunk_ordinal = batch.chunk_ordinal;
    out.ingoing.chunk_ordinal = batch.chunk_ordinal;
    out.outgoing.records.reserve(outgoing_count);
    out.ingoing.records.reserve(n - outgoing_count);
    for (std::size_t i = 0; i < n; ++i) {
        auto& dest = tags[i] == DirectionTag::Outgoing ? out.outgoing : out.ingoing;
        dest.records.push_back(std::move(batch.records[i]));
    }
    return out;
}

}  // namespace sessionflow
