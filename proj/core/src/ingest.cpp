#include "sessionflow/ingest.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <fmt/format.h>

namespace sessionflow {

namespace {

namespace fs = std::filesystem;

std::uint64_t file_size_or_throw(const std::string& path) {
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) {
        throw Error(ErrorKind::FileNotReadable, fmt::format("cannot read input '{}'", path));
    }
    const auto size = fs::file_size(path, ec);
    if (ec) {
        throw Error(ErrorKind::FileNotReadable, fmt::format("cannot stat input '{}': {}", path, ec.message()));
    }
    return size;
}

// Position one past the first '\n' at or after `from`, or `size` if none.
std::uint64_t line_end_at_or_after(std::ifstream& in, std::uint64_t from, std::uint64_t size) {
    constexpr std::size_t kBlock = 64 * 1024;
    char buf[kBlock];
    in.clear();
    in.seekg(static_cast<std::streamoff>(from));
    std::uint64_t pos = from;
    while (pos < size) {
        const auto want = static_cast<std::streamsize>(std::min<std::uint64_t>(kBlock, size - pos));
        in.read(buf, want);
        const std::streamsize got = in.gcount();
        if (got <= 0) {
            break;
        }
        for (std::streamsize i = 0; i < got; ++i) {
            if (buf[i] == '\n') {
                return pos + static_cast<std::uint64_t>(i) + 1;
            }
        }
        pos += static_cast<std::uint64_t>(got);
    }
    return size;
}

}  // namespace

std::vector<ChunkDescriptor> plan_chunks(std::span<const std::string> paths, std::uint64_t target_chunk_bytes) {
    if (target_chunk_bytes == 0) {
        throw Error(ErrorKind::InvalidArgument, "target_chunk_bytes must be >= 1");
    }
    std::vector<ChunkDescriptor> chunks;
    for (const std::string& path : paths) {
        const std::uint64_t size = file_size_or_throw(path);
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw Error(ErrorKind::FileNotReadable, fmt::format("cannot open input '{}'", path));
        }
        std::uint64_t offset = 0;
        while (offset < size) {
            std::uint64_t end = size;
            if (size - offset > target_chunk_bytes) {
                // The byte at offset + target - 1 is the last one the chunk
                // would hold; extend through the end of that line.
                end = line_end_at_or_after(in, offset + target_chunk_bytes - 1, size);
            }
            chunks.push_back({path, offset, end - offset, static_cast<std::uint64_t>(chunks.size())});
            offset = end;
        }
    }
    return chunks;
}

RecordBatch read_chunk(const ChunkDescriptor& chunk, const FormatSpec& format) {
    std::ifstream in(chunk.file_path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::FileNotReadable, fmt::format("cannot open input '{}'", chunk.file_path));
    }
    std::string data(chunk.byte_length, '\0');
    in.seekg(static_cast<std::streamoff>(chunk.byte_offset));
    in.read(data.data(), static_cast<std::streamsize>(chunk.byte_length));
    if (static_cast<std::uint64_t>(in.gcount()) != chunk.byte_length) {
        throw Error(ErrorKind::FileNotReadable,
                    fmt::format("short read of '{}' at offset {}", chunk.file_path, chunk.byte_offset));
    }

    RecordBatch batch;
    batch.chunk_ordinal = chunk.ordinal;
    // Session lines run ~150-250 bytes.
    batch.records.reserve(chunk.byte_length / 160 + 1);

    const std::string_view text(data);
    std::size_t pos = 0;
    bool skip_header = format.has_header && chunk.byte_offset == 0;
    SessionRecord scratch;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            nl = text.size();
        }
        std::string_view line = text.substr(pos, nl - pos);
        const std::size_t line_start = pos;
        pos = nl + 1;
        if (skip_header) {
            skip_header = false;
            continue;
        }
        if (line.empty() || line == "\r") {
            continue;
        }
        if (auto err = parse_session_line_into(line, format, scratch)) {
            ++batch.malformed_count;
            if (!batch.first_malformed) {
                batch.first_malformed = MalformedSample{chunk.byte_offset + line_start, *err};
            }
            continue;
        }
        batch.records.push_back(scratch);
    }
    return batch;
}

}  // namespace sessionflow
