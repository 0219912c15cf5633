#pragma once

#include "sessionflow/discriminator.hpp"
#include "sessionflow/timestamp.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace sessionflow {

// 2018/01/01 00:00:00 UTC
inline constexpr EpochMillis kDefaultDayStartMs = 1'514'764'800'000;

struct GeneratorConfig {
    std::uint64_t record_count = 0;
    EpochMillis day_start_ms = kDefaultDayStartMs;
    // Probability that a session's source address lies inside the home network.
    double inside_fraction = 0.5;
    bool diurnal = false;
    std::uint64_t seed = 1;
};

// Relative session rate per UTC hour of the generated day. The diurnal
// profile is 1 - 0.8 cos(2 pi h / 24): trough at 00:00, peak at 12:00.
std::array<double, 24> hourly_weights(bool diurnal) noexcept;

inline constexpr std::array<int, 3> kDiurnalPeakHours = {11, 12, 13};
inline constexpr std::array<int, 3> kDiurnalTroughHours = {23, 0, 1};

// Splits record_count across the 24 hours in proportion to the weights
// (largest-remainder rounding, so the counts sum exactly).
std::array<std::uint64_t, 24> hourly_counts(std::uint64_t record_count, bool diurnal);

// Writes record_count session lines in chronological order. Output is a pure
// function of (home, config). Throws Error(InvalidArgument) for an
// inside_fraction outside [0, 1] or a home network that leaves no outside
// address space when one is needed.
void generate_sessions(std::ostream& out, const HomeNetwork& home, const GeneratorConfig& config);

// Same, into a file written atomically. Throws Error(FileNotWritable).
void generate_sessions_file(const std::string& path, const HomeNetwork& home, const GeneratorConfig& config);

}  // namespace sessionflow
