#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "tigranet/layers/network.hpp"
#include "tigranet/training/adam.hpp"

namespace tigranet {

/// Binary container: magic "TGNCKPT\0", u32 version, u64 header length, a
/// JSON header (architecture, grid, seed, epoch, array table) and the arrays
/// as little-endian f64.
struct Checkpoint {
  Network network;
  std::optional<AdamState> adam;
  std::uint64_t seed = 0;
  int epoch = 0;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const std::filesystem::path& path, const Network& network,
                     const AdamState* adam, std::uint64_t seed, int epoch);

/// Throws FormatError on a malformed or incompatible file and
/// std::runtime_error when the file cannot be opened.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace tigranet
