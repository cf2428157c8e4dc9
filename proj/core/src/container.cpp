#include "container.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "tigranet/errors.hpp"

namespace tigranet::detail {

namespace {

template <typename T>
void put_le(std::string& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.append(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(const std::string& in, std::size_t pos) {
  if (pos + sizeof(T) > in.size()) throw FormatError("container truncated");
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

std::int64_t element_count(const std::vector<std::int64_t>& shape) {
  std::int64_t n = 1;
  for (const auto d : shape) {
    if (d < 0) throw FormatError("negative array dimension");
    n *= d;
  }
  return n;
}

}  // namespace

const ContainerArray& Container::array(std::string_view name) const {
  for (const auto& a : arrays) {
    if (a.name == name) return a;
  }
  throw FormatError("container has no array '" + std::string(name) + "'");
}

void write_container(const std::filesystem::path& path, std::string_view magic, std::uint32_t version,
                     nlohmann::json header, const std::vector<ContainerArray>& arrays) {
  std::string payload;
  auto table = nlohmann::json::array();
  for (const auto& a : arrays) {
    const std::size_t offset = payload.size();
    if (a.dtype == "f64") {
      for (const double v : a.f64) put_le(payload, v);
    } else if (a.dtype == "u8") {
      payload.append(reinterpret_cast<const char*>(a.u8.data()), a.u8.size());
    } else {
      throw std::invalid_argument("unsupported dtype " + a.dtype);
    }
    table.push_back({{"name", a.name},
                     {"dtype", a.dtype},
                     {"shape", a.shape},
                     {"offset", offset},
                     {"bytes", payload.size() - offset}});
  }
  header["arrays"] = std::move(table);
  const std::string text = header.dump();

  std::string blob(magic);
  blob.resize(8, '\0');
  put_le<std::uint32_t>(blob, version);
  put_le<std::uint64_t>(blob, text.size());
  blob += text;
  blob += payload;

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

Container read_container(const std::filesystem::path& path, std::string_view magic) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  std::string expected(magic);
  expected.resize(8, '\0');
  if (blob.size() < 20 || blob.compare(0, 8, expected) != 0) {
    throw FormatError(path.string() + ": bad magic");
  }
  Container c;
  c.version = get_le<std::uint32_t>(blob, 8);
  const auto header_len = get_le<std::uint64_t>(blob, 12);
  if (header_len > blob.size() - 20) throw FormatError(path.string() + ": header truncated");
  try {
    c.header = nlohmann::json::parse(blob.substr(20, header_len));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": bad header: " + e.what());
  }
  const std::size_t base = 20 + header_len;
  try {
    for (const auto& entry : c.header.at("arrays")) {
      ContainerArray a;
      a.name = entry.at("name").get<std::string>();
      a.dtype = entry.at("dtype").get<std::string>();
      a.shape = entry.at("shape").get<std::vector<std::int64_t>>();
      const auto offset = entry.at("offset").get<std::uint64_t>();
      const auto count = static_cast<std::size_t>(element_count(a.shape));
      const std::size_t width = a.dtype == "f64" ? 8 : (a.dtype == "u8" ? 1 : 0);
      if (width == 0) throw FormatError("unsupported dtype " + a.dtype);
      if (offset > blob.size() - base || count * width > blob.size() - base - offset) {
        throw FormatError(path.string() + ": array '" + a.name + "' truncated");
      }
      if (width == 8) {
        a.f64.resize(count);
        for (std::size_t i = 0; i < count; ++i) a.f64[i] = get_le<double>(blob, base + offset + 8 * i);
      } else {
        const auto* p = reinterpret_cast<const std::uint8_t*>(blob.data() + base + offset);
        a.u8.assign(p, p + count);
      }
      c.arrays.push_back(std::move(a));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": bad array table: " + e.what());
  }
  return c;
}

}  // namespace tigranet::detail
