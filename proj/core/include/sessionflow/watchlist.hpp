#pragma once

#include "sessionflow/ingest.hpp"
#include "sessionflow/ipv4.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sessionflow {

// A named set of exact IPv4 addresses (threat-intel export, blacklist).
class Watchlist {
public:
    Watchlist() = default;
    Watchlist(std::string name, std::vector<Ipv4Addr> addresses);

    const std::string& name() const noexcept { return name_; }
    std::size_t size() const noexcept { return addresses_.size(); }
    std::span<const Ipv4Addr> addresses() const noexcept { return addresses_; }

    bool contains(Ipv4Addr addr) const noexcept;

    // True when either endpoint of the session is listed.
    bool touches(const SessionRecord& record) const noexcept {
        return contains(record.source_ip) || contains(record.destination_ip);
    }

private:
    std::string name_;
    std::vector<Ipv4Addr> addresses_;  // sorted, unique
};

// One dotted quad per line; '#' comments and blank lines are ignored.
// Throws ParseError(MalformedAddress) with the line number.
Watchlist parse_watchlist(std::string_view text, std::string name);
// Also throws Error(FileNotReadable).
Watchlist load_watchlist(const std::string& path, std::string name);

// Keeps the records whose source or destination address is listed.
RecordBatch filter_batch(const RecordBatch& batch, const Watchlist& list);

}  // namespace sessionflow
