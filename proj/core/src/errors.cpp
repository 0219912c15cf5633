#include "sessionflow/errors.hpp"

#include <fmt/format.h>

namespace sessionflow {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::MalformedAddress: return "MalformedAddress";
    case ErrorKind::MalformedCidr: return "MalformedCidr";
    case ErrorKind::MalformedLine: return "MalformedLine";
    case ErrorKind::MalformedTimestamp: return "MalformedTimestamp";
    case ErrorKind::MalformedNumber: return "MalformedNumber";
    case ErrorKind::FileNotReadable: return "FileNotReadable";
    case ErrorKind::FileNotWritable: return "FileNotWritable";
    case ErrorKind::EmptyHomeNetwork: return "EmptyHomeNetwork";
    case ErrorKind::MixedBinWidth: return "MixedBinWidth";
    case ErrorKind::NonDivisibleWidth: return "NonDivisibleWidth";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::WorkerFailure: return "WorkerFailure";
    case ErrorKind::Cancelled: return "Cancelled";
    case ErrorKind::MismatchedOutputs: return "MismatchedOutputs";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

ParseError::ParseError(ErrorKind kind, std::uint64_t line_number, const std::string& detail)
    : Error(kind, line_number == 0
                      ? fmt::format("{}: {}", to_string(kind), detail)
                      : fmt::format("{} at line {}: {}", to_string(kind), line_number, detail)),
      line_number_(line_number) {}

WorkerFailure::WorkerFailure(std::uint64_t chunk_ordinal, const std::string& cause)
    : Error(ErrorKind::WorkerFailure, fmt::format("worker failed on chunk {}: {}", chunk_ordinal, cause)),
      chunk_ordinal_(chunk_ordinal) {}

}  // namespace sessionflow
