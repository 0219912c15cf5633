#include "sessionflow/generator.hpp"

#include "sessionflow/errors.hpp"
#include "sessionflow/session_record.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include <fmt/format.h>

namespace sessionflow {

namespace {

constexpr std::array<std::string_view, 7> kCountries = {"JP", "US", "CN", "DE", "GB", "KR", "NA"};
constexpr std::array<std::string_view, 3> kProtocols = {"tcp", "udp", "icmp"};
constexpr std::array<std::string_view, 8> kApplications = {"ssl",  "web-browsing", "dns",        "ssh",
                                                           "smtp", "ntp",          "incomplete", "NA"};
constexpr std::array<std::string_view, 4> kEndReasons = {"tcp-fin", "aged-out", "tcp-rst-from-client",
                                                         "policy-deny"};
constexpr std::array<std::string_view, 4> kCategories = {"any", "computer-and-internet-info",
                                                         "business-and-economy", "NA"};
constexpr std::array<std::uint16_t, 8> kServicePorts = {80, 443, 53, 22, 25, 123, 8080, 3389};

// mt19937_64 is fully specified by the standard; the helpers below avoid
// the implementation-defined std:: distributions so output is identical
// across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, n). Modulo bias is below 2^-40 for the ranges used here.
    std::uint64_t below(std::uint64_t n) { return engine_() % n; }

    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    template <class T, std::size_t N>
    const T& pick(const std::array<T, N>& items) {
        return items[below(N)];
    }

private:
    std::mt19937_64 engine_;
};

Ipv4Addr inside_address(Rng& rng, const HomeNetwork& home) {
    const auto blocks = home.blocks();
    const CidrBlock& b = blocks[rng.below(blocks.size())];
    const std::uint32_t host = static_cast<std::uint32_t>(rng.next()) & ~prefix_mask(b.prefix_len);
    return Ipv4Addr{b.network.value | host};
}

std::optional<Ipv4Addr> outside_address(Rng& rng, const HomeNetwork& home) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const Ipv4Addr candidate{static_cast<std::uint32_t>(rng.next())};
        if (discriminate_one(candidate, home) == DirectionTag::Ingoing) {
            return candidate;
        }
    }
    return std::nullopt;
}

SessionRecord make_record(Rng& rng, const HomeNetwork& home, EpochMillis t, bool inside) {
    SessionRecord r;
    r.capture_time = t;
    r.generated_time = floor_div(t, 1000);
    r.elapsed_time = rng.below(600);
    r.start_time = r.generated_time - static_cast<EpochSeconds>(r.elapsed_time);
    if (inside) {
        r.source_ip = inside_address(rng, home);
        r.destination_ip = outside_address(rng, home).value_or(Ipv4Addr{static_cast<std::uint32_t>(rng.next())});
    } else {
        auto source = outside_address(rng, home);
        if (!source) {
            throw Error(ErrorKind::InvalidArgument, "home network leaves no outside address space");
        }
        r.source_ip = *source;
        r.destination_ip = inside_address(rng, home);
    }
    r.source_port = static_cast<std::uint16_t>(1024 + rng.below(64512));
    r.src_country_code = inside ? "JP" : rng.pick(kCountries);
    r.destination_port = rng.pick(kServicePorts);
    r.dest_country_code = inside ? rng.pick(kCountries) : "JP";
    r.protocol = rng.pick(kProtocols);
    r.application = rng.pick(kApplications);
    r.subtype = "end";
    r.action = rng.below(10) == 0 ? "deny" : "allow";
    r.session_end_reason = rng.pick(kEndReasons);
    r.repeat_count = 1;
    r.category = rng.pick(kCategories);
    r.packets_sent = 1 + rng.below(50);
    r.packets_received = rng.below(51);
    r.packets = r.packets_sent + r.packets_received;
    r.bytes_sent = r.packets_sent * (40 + rng.below(1461));
    r.bytes_received = r.packets_received * (40 + rng.below(1461));
    r.bytes = r.bytes_sent + r.bytes_received;
    r.device_name = "PA-7080";
    return r;
}

}  // namespace

std::array<double, 24> hourly_weights(bool diurnal) noexcept {
    std::array<double, 24> w{};
    for (int h = 0; h < 24; ++h) {
        w[static_cast<std::size_t>(h)] = diurnal ? 1.0 - 0.8 * std::cos(2.0 * std::numbers::pi * h / 24.0) : 1.0;
    }
    return w;
}

std::array<std::uint64_t, 24> hourly_counts(std::uint64_t record_count, bool diurnal) {
    const auto w = hourly_weights(diurnal);
    double total = 0.0;
    for (double x : w) {
        total += x;
    }
    std::array<std::uint64_t, 24> counts{};
    std::array<double, 24> remainder{};
    std::uint64_t assigned = 0;
    for (std::size_t h = 0; h < 24; ++h) {
        const double exact = static_cast<double>(record_count) * w[h] / total;
        counts[h] = static_cast<std::uint64_t>(std::floor(exact));
        remainder[h] = exact - std::floor(exact);
        assigned += counts[h];
    }
    std::array<std::size_t, 24> order{};
    for (std::size_t h = 0; h < 24; ++h) {
        order[h] = h;
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t i = 0; assigned < record_count; i = (i + 1) % 24) {
        ++counts[order[i]];
        ++assigned;
    }
    return counts;
}

void generate_sessions(std::ostream& out, const HomeNetwork& home, const GeneratorConfig& config) {
    if (!(config.inside_fraction >= 0.0 && config.inside_fraction <= 1.0)) {
        throw Error(ErrorKind::InvalidArgument,
                    fmt::format("inside_fraction must be in [0,1], got {}", config.inside_fraction));
    }
    Rng rng(config.seed);
    const auto counts = hourly_counts(config.record_count, config.diurnal);
    const FormatSpec format;
    std::string buf;
    buf.reserve(1 << 21);
    std::vector<EpochMillis> stamps;
    for (std::size_t h = 0; h < 24; ++h) {
        const EpochMillis hour_start = config.day_start_ms + static_cast<EpochMillis>(h) * 3'600'000;
        stamps.resize(counts[h]);
        for (auto& t : stamps) {
            t = hour_start + static_cast<EpochMillis>(rng.below(3'600'000));
        }
        std::sort(stamps.begin(), stamps.end());
        for (EpochMillis t : stamps) {
            const bool inside = rng.unit() < config.inside_fraction;
            append_session_line(buf, make_record(rng, home, t, inside), format);
            buf.push_back('\n');
            if (buf.size() >= (1u << 20)) {
                out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
                buf.clear();
            }
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void generate_sessions_file(const std::string& path, const HomeNetwork& home, const GeneratorConfig& config) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path temp = fs::path(path + ".tmp");
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorKind::FileNotWritable, fmt::format("cannot write '{}'", path));
        }
        try {
            generate_sessions(out, home, config);
        } catch (...) {
            out.close();
            std::error_code ignored;
            fs::remove(temp, ignored);
            throw;
        }
        out.flush();
        if (!out) {
            std::error_code ignored;
            fs::remove(temp, ignored);
            throw Error(ErrorKind::FileNotWritable, fmt::format("write to '{}' failed", path));
        }
    }
    std::error_code ec;
    fs::rename(temp, target, ec);
    if (ec) {
        fs::remove(temp, ec);
        throw Error(ErrorKind::FileNotWritable, fmt::format("cannot move output into '{}'", path));
    }
}

}  // namespace sessionflow
