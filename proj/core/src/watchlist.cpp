#include "sessionflow/watchlist.hpp"

#include "sessionflow/errors.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace sessionflow {

Watchlist::Watchlist(std::string name, std::vector<Ipv4Addr> addresses)
    : name_(std::move(name)), addresses_(std::move(addresses)) {
    std::sort(addresses_.begin(), addresses_.end());
    addresses_.erase(std::unique(addresses_.begin(), addresses_.end()), addresses_.end());
}

bool Watchlist::contains(Ipv4Addr addr) const noexcept {
    return std::binary_search(addresses_.begin(), addresses_.end(), addr);
}

Watchlist parse_watchlist(std::string_view text, std::string name) {
    std::vector<Ipv4Addr> addresses;
    std::uint64_t line_number = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
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
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string_view::npos) {
            continue;
        }
        line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
        auto addr = try_parse_ipv4(line);
        if (!addr) {
            throw ParseError(ErrorKind::MalformedAddress, line_number, fmt::format("'{}' in watchlist '{}'", line, name));
        }
        addresses.push_back(*addr);
    }
    return Watchlist(std::move(name), std::move(addresses));
}

Watchlist load_watchlist(const std::string& path, std::string name) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::FileNotReadable, fmt::format("cannot read watchlist '{}'", path));
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_watchlist(ss.str(), std::move(name));
}

RecordBatch filter_batch(const RecordBatch& batch, const Watchlist& list) {
    RecordBatch out;
    out.chunk_ordinal = batch.chunk_ordinal;
    if (list.size() == 0) {
        return out;
    }
    for (const SessionRecord& r : batch.records) {
        if (list.touches(r)) {
            out.records.push_back(r);
        }
    }
    return out;
}

}  // namespace sessionflow
