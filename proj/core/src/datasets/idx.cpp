#include "tigranet/datasets/idx.hpp"

#include <zlib.h>

#include <fstream>
#include <iterator>
#include <limits>

#include "tigranet/errors.hpp"

namespace tigranet {

std::size_t IdxArray::item_size() const {
  std::size_t n = 1;
  for (std::size_t i = 1; i < dims.size(); ++i) n *= dims[i];
  return n;
}

IdxArray parse_idx(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw FormatError("IDX buffer shorter than its magic");
  if (bytes[0] != 0 || bytes[1] != 0) throw FormatError("bad IDX magic");
  if (bytes[2] != 0x08) throw FormatError("unsupported IDX element type (only unsigned bytes)");
  const std::size_t ndims = bytes[3];
  if (ndims == 0) throw FormatError("IDX tensor without dimensions");
  if (bytes.size() < 4 + 4 * ndims) throw FormatError("IDX header truncated");

  IdxArray out;
  std::size_t total = 1;
  for (std::size_t d = 0; d < ndims; ++d) {
    const auto* p = bytes.data() + 4 + 4 * d;
    const std::uint32_t dim = static_cast<std::uint32_t>(p[0]) << 24 | static_cast<std::uint32_t>(p[1]) << 16 |
                              static_cast<std::uint32_t>(p[2]) << 8 | p[3];
    if (dim != 0 && total > std::numeric_limits<std::size_t>::max() / dim) {
      throw FormatError("IDX dimensions overflow");
    }
    total *= dim;
    out.dims.push_back(dim);
  }
  const std::size_t offset = 4 + 4 * ndims;
  if (bytes.size() - offset < total) throw FormatError("IDX payload truncated");
  if (bytes.size() - offset > total) throw FormatError("IDX payload has trailing bytes");
  out.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(offset), bytes.end());
  return out;
}

std::vector<std::uint8_t> gunzip(std::span<const std::uint8_t> bytes) {
  z_stream zs{};
  if (inflateInit2(&zs, 15 + 32) != Z_OK) throw FormatError("zlib initialization failed");
  zs.next_in = const_cast<Bytef*>(bytes.data());
  zs.avail_in = static_cast<uInt>(bytes.size());
  std::vector<std::uint8_t> out;
  std::uint8_t chunk[1 << 16];
  int status = Z_OK;
  while (status != Z_STREAM_END) {
    zs.next_out = chunk;
    zs.avail_out = sizeof(chunk);
    status = inflate(&zs, Z_NO_FLUSH);
    if (status != Z_OK && status != Z_STREAM_END) {
      inflateEnd(&zs);
      throw FormatError("corrupt gzip stream");
    }
    out.insert(out.end(), chunk, chunk + (sizeof(chunk) - zs.avail_out));
    if (status == Z_OK && zs.avail_in == 0 && zs.avail_out != 0) {
      inflateEnd(&zs);
      throw FormatError("truncated gzip stream");
    }
  }
  inflateEnd(&zs);
  return out;
}

IdxArray read_idx_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const std::vector<std::uint8_t> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    if (raw.size() >= 2 && raw[0] == 0x1f && raw[1] == 0x8b) return parse_idx(gunzip(raw));
    return parse_idx(raw);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> write_idx(const IdxArray& array) {
  if (array.dims.empty() || array.dims.size() > 255) throw std::invalid_argument("IDX needs 1..255 dimensions");
  std::vector<std::uint8_t> out{0, 0, 0x08, static_cast<std::uint8_t>(array.dims.size())};
  for (const auto d : array.dims) {
    out.push_back(static_cast<std::uint8_t>(d >> 24));
    out.push_back(static_cast<std::uint8_t>(d >> 16));
    out.push_back(static_cast<std::uint8_t>(d >> 8));
    out.push_back(static_cast<std::uint8_t>(d));
  }
  out.insert(out.end(), array.data.begin(), array.data.end());
  return out;
}

}  // namespace tigranet
