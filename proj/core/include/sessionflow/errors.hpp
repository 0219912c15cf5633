#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sessionflow {

enum class ErrorKind {
    MalformedAddress,
    MalformedCidr,
    MalformedLine,
    MalformedTimestamp,
    MalformedNumber,
    FileNotReadable,
    FileNotWritable,
    EmptyHomeNetwork,
    MixedBinWidth,
    NonDivisibleWidth,
    InvalidArgument,
    WorkerFailure,
    Cancelled,
    MismatchedOutputs,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Parse failure tied to a 1-based line number of some text source
// (0 when the caller did not supply one).
class ParseError : public Error {
public:
    ParseError(ErrorKind kind, std::uint64_t line_number, const std::string& detail);

    std::uint64_t line_number() const noexcept { return line_number_; }

private:
    std::uint64_t line_number_;
};

class WorkerFailure : public Error {
public:
    WorkerFailure(std::uint64_t chunk_ordinal, const std::string& cause);

    std::uint64_t chunk_ordinal() const noexcept { return chunk_ordinal_; }

private:
    std::uint64_t chunk_ordinal_;
};

}  // namespace sessionflow
