#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace tigranet {

/// Unsigned-byte IDX tensor (the MNIST container).
struct IdxArray {
  std::vector<std::uint32_t> dims;
  std::vector<std::uint8_t> data;

  std::size_t count() const { return dims.empty() ? 0 : dims.front(); }
  /// Elements per item (product of the trailing dimensions).
  std::size_t item_size() const;
};

/// Parses a raw IDX buffer: magic 0x0000 08 <ndims>, big-endian u32 dims,
/// row-major payload. Throws FormatError on a bad magic, unsupported element
/// type, dimension overflow or truncated payload.
IdxArray parse_idx(std::span<const std::uint8_t> bytes);

/// Reads a file, inflating it first when it carries a gzip header.
IdxArray read_idx_file(const std::filesystem::path& path);

/// Serializes to the raw (uncompressed) IDX layout.
std::vector<std::uint8_t> write_idx(const IdxArray& array);

/// gzip or zlib inflate; throws FormatError on corrupt input.
std::vector<std::uint8_t> gunzip(std::span<const std::uint8_t> bytes);

}  // namespace tigranet
