#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "tigranet/types.hpp"

namespace tigranet {

/// Row-major grayscale image. Values from 8-bit files are scaled to [0, 1].
struct GrayImage {
  int height = 0;
  int width = 0;
  std::vector<double> pixels;

  GrayImage() = default;
  GrayImage(int h, int w, double fill = 0.0);

  double& at(int row, int col) { return pixels[static_cast<std::size_t>(row) * width + col]; }
  double at(int row, int col) const { return pixels[static_cast<std::size_t>(row) * width + col]; }
  bool empty() const { return pixels.empty(); }

  /// Row-major node order, matching GridGraph indexing.
  GraphSignal to_signal() const;
  static GrayImage from_signal(const GraphSignal& signal, int height, int width);
  static GrayImage from_u8(const std::uint8_t* data, int height, int width);
};

/// Binary (P5) or ASCII (P2) graymap with maxval <= 65535.
GrayImage read_pgm(const std::filesystem::path& path);

/// Writes P5 8-bit. Values are mapped linearly from [lo, hi] to [0, 255] and
/// clamped; lo == hi writes mid-gray.
void write_pgm(const std::filesystem::path& path, const GrayImage& image, double lo = 0.0, double hi = 1.0);

/// Any PNG decodable by libpng, converted to 8-bit gray.
GrayImage read_png(const std::filesystem::path& path);

/// Dispatches on the extension (.png, .pgm). Throws FormatError otherwise.
GrayImage read_image(const std::filesystem::path& path);

/// All .png/.pgm files directly under `dir`, in sorted path order.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);

}  // namespace tigranet
