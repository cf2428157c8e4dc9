#pragma once

#include <cstdint>

#include "tigranet/imaging/image.hpp"
#include "tigranet/rng.hpp"

namespace tigranet {

/// Image coordinates: x is the column (rightward), y is the row (downward),
/// pixel centers sit on integers.

/// Bilinear sample; lattice points outside the image read as 0.
double sample_bilinear(const GrayImage& image, double x, double y);

/// Resize with half-pixel-centered bilinear interpolation, clamping at edges.
GrayImage resize_bilinear(const GrayImage& image, int height, int width);

/// out(p) = in(R^-1 (p - c) + c) with R = [[cos, -sin], [sin, cos]]; zero fill.
GrayImage rotate_bilinear(const GrayImage& image, double gamma, double center_x, double center_y);
/// Rotation about the image center ((w - 1) / 2, (h - 1) / 2).
GrayImage rotate_bilinear(const GrayImage& image, double gamma);

/// out(p) = in(p - (dx, dy)); zero fill.
GrayImage translate_bilinear(const GrayImage& image, double dx, double dy);

/// Exact integer shift; zero fill.
GrayImage translate_integer(const GrayImage& image, int dx, int dy);

/// Grows the image by `margin` zero pixels on every side.
GrayImage pad_image(const GrayImage& image, int margin);

/// Antialiased separable Catmull-Rom (a = -0.5) reduction to
/// floor(h / factor) x floor(w / factor); the kernel is stretched by the
/// scale so every source pixel contributes.
GrayImage downsample_bicubic(const GrayImage& image, int factor);

/// Sum of `count` Gaussian bumps with centers in [0.3, 0.7]^2, widths in
/// [0.15, 0.35] and amplitudes in [-1, 1] (the first is +1), sampled at cell
/// centers ((c + 0.5) / n, (r + 0.5) / n).
GrayImage gaussian_bumps(int size, int count, Rng& rng);

/// Random cubic polynomial in (a, b) with coefficients in [-1, 1] and no
/// constant or linear terms, sampled like gaussian_bumps.
GrayImage random_polynomial(int size, Rng& rng);

}  // namespace tigranet
