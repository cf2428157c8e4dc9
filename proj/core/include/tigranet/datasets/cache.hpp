#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "tigranet/datasets/mnist.hpp"

namespace tigranet {

inline constexpr std::uint32_t kDatasetCacheVersion = 1;

/// Binary container: magic "TGNDSET\0", u32 version, u64 header length, JSON
/// header (name, seed, grid, generation parameters, array table), then per
/// split little-endian f64 signals, u8 labels, f64 source indices and f64
/// transforms (rotation, shift_x, shift_y).
void save_dataset(const std::filesystem::path& path, const DatasetSplits& splits, std::uint64_t seed,
                  const std::string& generation_params_json);

struct CachedDataset {
  DatasetSplits splits;
  std::uint64_t seed = 0;
  std::string generation_params_json;
};

/// Throws FormatError on malformed files, std::runtime_error when unreadable.
CachedDataset load_dataset(const std::filesystem::path& path);

}  // namespace tigranet
