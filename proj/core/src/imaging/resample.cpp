#include "tigranet/imaging/resample.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tigranet {

namespace {

double pixel_or_zero(const GrayImage& image, long row, long col) {
  if (row < 0 || col < 0 || row >= image.height || col >= image.width) return 0.0;
  return image.at(static_cast<int>(row), static_cast<int>(col));
}

double catmull_rom(double x) {
  constexpr double a = -0.5;
  x = std::abs(x);
  if (x < 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
  if (x < 2.0) return (((x - 5.0) * x + 8.0) * x - 4.0) * a;
  return 0.0;
}

struct Taps {
  int first = 0;
  std::vector<double> weights;
};

std::vector<Taps> reduction_taps(int in_size, int out_size) {
  const double scale = static_cast<double>(in_size) / out_size;
  const double support = 2.0 * std::max(scale, 1.0);
  std::vector<Taps> taps(static_cast<std::size_t>(out_size));
  for (int i = 0; i < out_size; ++i) {
    const double center = (i + 0.5) * scale;
    const int lo = std::max(0, static_cast<int>(std::floor(center - support)));
    const int hi = std::min(in_size, static_cast<int>(std::ceil(center + support)));
    auto& t = taps[static_cast<std::size_t>(i)];
    t.first = lo;
    double total = 0.0;
    for (int j = lo; j < hi; ++j) {
      const double w = catmull_rom((j + 0.5 - center) / std::max(scale, 1.0));
      t.weights.push_back(w);
      total += w;
    }
    for (auto& w : t.weights) w /= total;
  }
  return taps;
}

}  // namespace

double sample_bilinear(const GrayImage& image, double x, double y) {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const double tx = x - fx;
  const double ty = y - fy;
  const auto c0 = static_cast<long>(fx);
  const auto r0 = static_cast<long>(fy);
  return pixel_or_zero(image, r0, c0) * (1.0 - tx) * (1.0 - ty) +
         pixel_or_zero(image, r0, c0 + 1) * tx * (1.0 - ty) +
         pixel_or_zero(image, r0 + 1, c0) * (1.0 - tx) * ty + pixel_or_zero(image, r0 + 1, c0 + 1) * tx * ty;
}

GrayImage resize_bilinear(const GrayImage& image, int height, int width) {
  if (height < 1 || width < 1 || image.empty()) throw std::invalid_argument("resize to or from an empty image");
  GrayImage out(height, width);
  const double sy = static_cast<double>(image.height) / height;
  const double sx = static_cast<double>(image.width) / width;
  for (int r = 0; r < height; ++r) {
    const double y = std::clamp((r + 0.5) * sy - 0.5, 0.0, image.height - 1.0);
    for (int c = 0; c < width; ++c) {
      const double x = std::clamp((c + 0.5) * sx - 0.5, 0.0, image.width - 1.0);
      out.at(r, c) = sample_bilinear(image, x, y);
    }
  }
  return out;
}

GrayImage rotate_bilinear(const GrayImage& image, double gamma, double center_x, double center_y) {
  GrayImage out(image.height, image.width);
  const double c = std::cos(gamma);
  const double s = std::sin(gamma);
  for (int r = 0; r < image.height; ++r) {
    for (int col = 0; col < image.width; ++col) {
      const double dx = col - center_x;
      const double dy = r - center_y;
      out.at(r, col) = sample_bilinear(image, c * dx + s * dy + center_x, -s * dx + c * dy + center_y);
    }
  }
  return out;
}

GrayImage rotate_bilinear(const GrayImage& image, double gamma) {
  return rotate_bilinear(image, gamma, (image.width - 1) / 2.0, (image.height - 1) / 2.0);
}

GrayImage translate_bilinear(const GrayImage& image, double dx, double dy) {
  GrayImage out(image.height, image.width);
  for (int r = 0; r < image.height; ++r) {
    for (int c = 0; c < image.width; ++c) out.at(r, c) = sample_bilinear(image, c - dx, r - dy);
  }
  return out;
}

GrayImage translate_integer(const GrayImage& image, int dx, int dy) {
  GrayImage out(image.height, image.width);
  for (int r = 0; r < image.height; ++r) {
    for (int c = 0; c < image.width; ++c) out.at(r, c) = pixel_or_zero(image, r - dy, c - dx);
  }
  return out;
}

GrayImage pad_image(const GrayImage& image, int margin) {
  if (margin < 0) throw std::invalid_argument("negative padding");
  GrayImage out(image.height + 2 * margin, image.width + 2 * margin);
  for (int r = 0; r < image.height; ++r) {
    for (int c = 0; c < image.width; ++c) out.at(r + margin, c + margin) = image.at(r, c);
  }
  return out;
}

GrayImage downsample_bicubic(const GrayImage& image, int factor) {
  if (factor < 1) throw std::invalid_argument("downsampling factor must be >= 1");
  const int oh = image.height / factor;
  const int ow = image.width / factor;
  if (oh < 1 || ow < 1) throw std::invalid_argument("image too small for the downsampling factor");
  if (factor == 1) return image;

  const auto htaps = reduction_taps(image.width, ow);
  const auto vtaps = reduction_taps(image.height, oh);
  GrayImage horizontal(image.height, ow);
  for (int r = 0; r < image.height; ++r) {
    for (int c = 0; c < ow; ++c) {
      const auto& t = htaps[static_cast<std::size_t>(c)];
      double acc = 0.0;
      for (std::size_t j = 0; j < t.weights.size(); ++j) acc += t.weights[j] * image.at(r, t.first + static_cast<int>(j));
      horizontal.at(r, c) = acc;
    }
  }
  GrayImage out(oh, ow);
  for (int r = 0; r < oh; ++r) {
    const auto& t = vtaps[static_cast<std::size_t>(r)];
    for (int c = 0; c < ow; ++c) {
      double acc = 0.0;
      for (std::size_t j = 0; j < t.weights.size(); ++j) acc += t.weights[j] * horizontal.at(t.first + static_cast<int>(j), c);
      out.at(r, c) = acc;
    }
  }
  return out;
}

GrayImage gaussian_bumps(int size, int count, Rng& rng) {
  if (size < 1 || count < 1) throw std::invalid_argument("gaussian_bumps needs size >= 1 and count >= 1");
  GrayImage out(size, size);
  for (int b = 0; b < count; ++b) {
    const double cx = rng.uniform(0.3, 0.7);
    const double cy = rng.uniform(0.3, 0.7);
    const double sigma = rng.uniform(0.15, 0.35);
    const double amp = b == 0 ? 1.0 : rng.uniform(-1.0, 1.0);
    for (int r = 0; r < size; ++r) {
      const double y = (r + 0.5) / size - cy;
      for (int c = 0; c < size; ++c) {
        const double x = (c + 0.5) / size - cx;
        out.at(r, c) += amp * std::exp(-(x * x + y * y) / (2.0 * sigma * sigma));
      }
    }
  }
  return out;
}

GrayImage random_polynomial(int size, Rng& rng) {
  if (size < 1) throw std::invalid_argument("random_polynomial needs size >= 1");
  double k[7];
  for (double& v : k) v = rng.uniform(-1.0, 1.0);
  GrayImage out(size, size);
  for (int r = 0; r < size; ++r) {
    const double b = (r + 0.5) / size;
    for (int c = 0; c < size; ++c) {
      const double a = (c + 0.5) / size;
      out.at(r, c) = k[0] * a * a + k[1] * b * b + k[2] * a * b + k[3] * a * a * a + k[4] * b * b * b +
                     k[5] * a * a * b + k[6] * a * b * b;
    }
  }
  return out;
}

}  // namespace tigranet
