#include "tigranet/imaging/image.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "tigranet/errors.hpp"

namespace tigranet {

GrayImage::GrayImage(int h, int w, double fill)
    : height(h), width(w), pixels(static_cast<std::size_t>(h) * static_cast<std::size_t>(w), fill) {
  if (h < 0 || w < 0) throw std::invalid_argument("negative image size");
}

GraphSignal GrayImage::to_signal() const {
  return Eigen::Map<const GraphSignal>(pixels.data(), static_cast<Index>(pixels.size()));
}

GrayImage GrayImage::from_signal(const GraphSignal& signal, int height, int width) {
  if (signal.size() != static_cast<Index>(height) * width) {
    throw DimensionError("signal length does not match the image size");
  }
  GrayImage img(height, width);
  std::copy(signal.data(), signal.data() + signal.size(), img.pixels.begin());
  return img;
}

GrayImage GrayImage::from_u8(const std::uint8_t* data, int height, int width) {
  GrayImage img(height, width);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = data[i] / 255.0;
  return img;
}

namespace {

std::string next_pnm_token(std::istream& in) {
  std::string token;
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string discard;
      std::getline(in, discard);
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      token.push_back(c);
      break;
    }
  }
  while (in.get(c) && !std::isspace(static_cast<unsigned char>(c))) token.push_back(c);
  return token;
}

int parse_positive(const std::string& token, const std::filesystem::path& path) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(token, &used);
    if (used != token.size() || v < 1) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw FormatError(path.string() + ": bad PGM header field '" + token + "'");
  }
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const std::string magic = next_pnm_token(in);
  if (magic != "P5" && magic != "P2") throw FormatError(path.string() + ": not a PGM file");
  const int w = parse_positive(next_pnm_token(in), path);
  const int h = parse_positive(next_pnm_token(in), path);
  const int maxval = parse_positive(next_pnm_token(in), path);
  if (maxval > 65535) throw FormatError(path.string() + ": maxval out of range");

  GrayImage img(h, w);
  if (magic == "P5") {
    const int bytes = maxval < 256 ? 1 : 2;
    std::vector<unsigned char> raw(img.pixels.size() * static_cast<std::size_t>(bytes));
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) throw FormatError(path.string() + ": truncated");
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
      const int v = bytes == 1 ? raw[i] : (raw[2 * i] << 8 | raw[2 * i + 1]);
      img.pixels[i] = static_cast<double>(v) / maxval;
    }
  } else {
    for (auto& p : img.pixels) {
      const std::string token = next_pnm_token(in);
      if (token.empty()) throw FormatError(path.string() + ": truncated");
      p = std::stod(token) / maxval;
    }
  }
  return img;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image, double lo, double hi) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  std::vector<unsigned char> raw(image.pixels.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double t = hi > lo ? (image.pixels[i] - lo) / (hi - lo) : 0.5;
    raw[i] = static_cast<unsigned char>(std::lround(std::clamp(t, 0.0, 1.0) * 255.0));
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

GrayImage read_png(const std::filesystem::path& path) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    throw FormatError(path.string() + ": " + png.message);
  }
  png.format = PNG_FORMAT_GRAY;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, buffer.data(), 0, nullptr)) {
    const std::string message = png.message;
    png_image_free(&png);
    throw FormatError(path.string() + ": " + message);
  }
  return GrayImage::from_u8(buffer.data(), static_cast<int>(png.height), static_cast<int>(png.width));
}

GrayImage read_image(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".png") return read_png(path);
  if (ext == ".pgm") return read_pgm(path);
  throw FormatError(path.string() + ": unsupported image extension");
}

std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png" || ext == ".pgm") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace tigranet
