#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace tigranet::detail {

/// One named array in a container payload.
struct ContainerArray {
  std::string name;
  std::string dtype;  ///< "f64" or "u8"
  std::vector<std::int64_t> shape;
  std::vector<double> f64;
  std::vector<std::uint8_t> u8;
};

struct Container {
  std::uint32_t version = 0;
  nlohmann::json header;
  std::vector<ContainerArray> arrays;

  const ContainerArray& array(std::string_view name) const;
};

/// Layout: 8-byte magic, u32 version, u64 header length, JSON header with an
/// "arrays" table of {name, dtype, shape, offset, bytes}, then the payload.
/// All integers and floats are little-endian.
void write_container(const std::filesystem::path& path, std::string_view magic, std::uint32_t version,
                     nlohmann::json header, const std::vector<ContainerArray>& arrays);

Container read_container(const std::filesystem::path& path, std::string_view magic);

}  // namespace tigranet::detail
