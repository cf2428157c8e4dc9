#pragma once

#include <array>
#include <optional>
#include <vector>

#include "tigranet/imaging/image.hpp"
#include "tigranet/types.hpp"

namespace tigranet {

/// Isometry p -> R(gamma) S (p - c) + c + xi of the image plane, with S the
/// horizontal flip x -> -x when `reflect` is set. Coordinates are (x, y) =
/// (column, row) and R = [[cos, -sin], [sin, cos]]. A signal is transformed
/// by out(T p) = in(p).
struct TransformSpec {
  double gamma = 0.0;
  double xi_x = 0.0;
  double xi_y = 0.0;
  bool reflect = false;
  /// Rotation/reflection center (x, y); the image center when unset.
  std::optional<std::array<double, 2>> center;

  static TransformSpec rotation(double gamma);
  static TransformSpec translation(double dx, double dy);
  /// Mirror across the vertical axis (columns reversed).
  static TransformSpec horizontal_reflection();
  /// Mirror across the horizontal axis (rows reversed).
  static TransformSpec vertical_reflection();

  /// gamma is a multiple of pi/2 and xi is integral (within `tol`).
  bool is_graph_isometric(double tol = 1e-9) const;
};

/// Closest graph-isometric transform: gamma rounded to the nearest multiple
/// of pi/2 and xi rounded per coordinate. Reflection and center are kept.
TransformSpec closest_graph_isometry(const TransformSpec& spec);

/// A graph-isometric transform as an exact lattice map. With doubled centered
/// coordinates P = (2x - (w - 1), 2y - (h - 1)) it reads P -> A P + shift
/// for an integer orthogonal A and integer shift.
class GraphIsometry {
 public:
  /// Throws std::invalid_argument if spec is not graph-isometric and
  /// DimensionError if it does not map the h x w lattice onto itself
  /// (e.g. a quarter turn of a non-square grid).
  GraphIsometry(const TransformSpec& spec, int height, int width);

  int height() const { return height_; }
  int width() const { return width_; }
  const std::array<int, 4>& matrix() const { return a_; }
  const std::array<int, 2>& shift() const { return shift_; }

  /// Apply `this` first, then `then`.
  GraphIsometry then(const GraphIsometry& next) const;

  /// target[i]: node that node i moves to, or -1 when it leaves the grid.
  std::vector<Index> permutation() const;

  GraphSignal apply(const GraphSignal& signal) const;

 private:
  GraphIsometry() = default;
  int height_ = 0;
  int width_ = 0;
  std::array<int, 4> a_{1, 0, 0, 1};
  std::array<int, 2> shift_{0, 0};
};

/// Node permutation with zero fill. Requires a graph-isometric spec.
GraphSignal apply_graph_isometry(const GraphSignal& signal, int height, int width, const TransformSpec& spec);

/// Bilinear resampling out(q) = in(T^-1 q); samples outside the grid read 0.
GraphSignal apply_general_isometry(const GraphSignal& signal, int height, int width, const TransformSpec& spec);
GrayImage apply_general_isometry(const GrayImage& image, const TransformSpec& spec);

/// Inverse transform (same center).
TransformSpec inverse(const TransformSpec& spec);

}  // namespace tigranet
