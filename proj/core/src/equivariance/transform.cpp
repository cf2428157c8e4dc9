#include "tigranet/equivariance/transform.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tigranet/errors.hpp"
#include "tigranet/imaging/resample.hpp"

namespace tigranet {

namespace {

constexpr double kQuarter = std::numbers::pi / 2.0;

bool near_integer(double v, double tol) { return std::abs(v - std::round(v)) <= tol; }

int quarter_turns(double gamma) {
  const long k = std::lround(gamma / kQuarter);
  return static_cast<int>(((k % 4) + 4) % 4);
}

std::array<double, 2> center_of(const TransformSpec& spec, int height, int width) {
  if (spec.center) return *spec.center;
  return {(width - 1) / 2.0, (height - 1) / 2.0};
}

}  // namespace

TransformSpec TransformSpec::rotation(double gamma) {
  TransformSpec s;
  s.gamma = gamma;
  return s;
}

TransformSpec TransformSpec::translation(double dx, double dy) {
  TransformSpec s;
  s.xi_x = dx;
  s.xi_y = dy;
  return s;
}

TransformSpec TransformSpec::horizontal_reflection() {
  TransformSpec s;
  s.reflect = true;
  return s;
}

TransformSpec TransformSpec::vertical_reflection() {
  TransformSpec s;
  s.reflect = true;
  s.gamma = std::numbers::pi;
  return s;
}

bool TransformSpec::is_graph_isometric(double tol) const {
  return near_integer(gamma / kQuarter, tol) && near_integer(xi_x, tol) && near_integer(xi_y, tol);
}

TransformSpec closest_graph_isometry(const TransformSpec& spec) {
  TransformSpec out = spec;
  out.gamma = std::round(spec.gamma / kQuarter) * kQuarter;
  out.xi_x = std::round(spec.xi_x);
  out.xi_y = std::round(spec.xi_y);
  return out;
}

TransformSpec inverse(const TransformSpec& spec) {
  // T p = R S (p - c) + c + xi  =>  T^-1 q = S R^-1 (q - c - xi) + c.
  // With S R(-g) = R(g) S the inverse is R(g') S' (q - c) + c + xi' where,
  // without reflection, g' = -g and xi' = -R(-g) xi; with reflection, g' = g
  // and xi' = -S R(-g) xi.
  TransformSpec inv = spec;
  const double c = std::cos(spec.gamma);
  const double s = std::sin(spec.gamma);
  double rx = c * spec.xi_x + s * spec.xi_y;
  const double ry = -s * spec.xi_x + c * spec.xi_y;
  if (spec.reflect) {
    rx = -rx;
  } else {
    inv.gamma = -spec.gamma;
  }
  inv.xi_x = -rx;
  inv.xi_y = -ry;
  return inv;
}

GraphIsometry::GraphIsometry(const TransformSpec& spec, int height, int width)
    : height_(height), width_(width) {
  if (!spec.is_graph_isometric()) throw std::invalid_argument("transform is not graph-isometric");
  static constexpr std::array<std::array<int, 4>, 4> kRot = {{
      {1, 0, 0, 1}, {0, -1, 1, 0}, {-1, 0, 0, -1}, {0, 1, -1, 0}}};
  const int turns = quarter_turns(spec.gamma);
  if (turns % 2 == 1 && height != width) {
    throw DimensionError("quarter turns need a square grid");
  }
  const auto& r = kRot[static_cast<std::size_t>(turns)];
  a_ = spec.reflect ? std::array<int, 4>{-r[0], r[1], -r[2], r[3]} : r;

  const auto [cx, cy] = center_of(spec, height, width);
  const double dcx = 2.0 * cx - (width - 1);
  const double dcy = 2.0 * cy - (height - 1);
  if (!near_integer(dcx, 1e-9) || !near_integer(dcy, 1e-9)) {
    throw DimensionError("rotation center is not on the half-pixel lattice");
  }
  const long ccx = std::lround(dcx);
  const long ccy = std::lround(dcy);
  shift_ = {static_cast<int>(ccx - (a_[0] * ccx + a_[1] * ccy) + 2 * std::lround(spec.xi_x)),
            static_cast<int>(ccy - (a_[2] * ccx + a_[3] * ccy) + 2 * std::lround(spec.xi_y))};
  // Lattice compatibility: doubled coordinates keep the parity of (w - 1, h - 1).
  const int px = (width - 1) & 1;
  const int py = (height - 1) & 1;
  const int mx = ((a_[0] * px + a_[1] * py + shift_[0]) % 2 + 2) % 2;
  const int my = ((a_[2] * px + a_[3] * py + shift_[1]) % 2 + 2) % 2;
  if (mx != px || my != py) throw DimensionError("transform does not map this grid onto itself");
}

GraphIsometry GraphIsometry::then(const GraphIsometry& next) const {
  if (next.height_ != height_ || next.width_ != width_) throw DimensionError("composing isometries of different grids");
  const auto& b = next.a_;
  GraphIsometry out;
  out.height_ = height_;
  out.width_ = width_;
  out.a_ = {b[0] * a_[0] + b[1] * a_[2], b[0] * a_[1] + b[1] * a_[3],
            b[2] * a_[0] + b[3] * a_[2], b[2] * a_[1] + b[3] * a_[3]};
  out.shift_ = {b[0] * shift_[0] + b[1] * shift_[1] + next.shift_[0],
                b[2] * shift_[0] + b[3] * shift_[1] + next.shift_[1]};
  return out;
}

std::vector<Index> GraphIsometry::permutation() const {
  std::vector<Index> target(static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_), -1);
  for (int r = 0; r < height_; ++r) {
    const int py = 2 * r - (height_ - 1);
    for (int c = 0; c < width_; ++c) {
      const int px = 2 * c - (width_ - 1);
      const int qx = a_[0] * px + a_[1] * py + shift_[0];
      const int qy = a_[2] * px + a_[3] * py + shift_[1];
      const int tc = (qx + width_ - 1) / 2;
      const int tr = (qy + height_ - 1) / 2;
      if (tc >= 0 && tc < width_ && tr >= 0 && tr < height_ && qx + width_ - 1 >= 0 && qy + height_ - 1 >= 0) {
        target[static_cast<std::size_t>(r) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(c)] =
            static_cast<Index>(tr) * width_ + tc;
      }
    }
  }
  return target;
}

GraphSignal GraphIsometry::apply(const GraphSignal& signal) const {
  if (signal.size() != static_cast<Index>(height_) * width_) throw DimensionError("signal does not match the grid");
  const auto target = permutation();
  GraphSignal out = GraphSignal::Zero(signal.size());
  for (Index i = 0; i < signal.size(); ++i) {
    if (target[static_cast<std::size_t>(i)] >= 0) out[target[static_cast<std::size_t>(i)]] = signal[i];
  }
  return out;
}

GraphSignal apply_graph_isometry(const GraphSignal& signal, int height, int width, const TransformSpec& spec) {
  return GraphIsometry(spec, height, width).apply(signal);
}

GrayImage apply_general_isometry(const GrayImage& image, const TransformSpec& spec) {
  const auto [cx, cy] = center_of(spec, image.height, image.width);
  const double c = std::cos(spec.gamma);
  const double s = std::sin(spec.gamma);
  GrayImage out(image.height, image.width);
  for (int r = 0; r < image.height; ++r) {
    for (int col = 0; col < image.width; ++col) {
      // p = S R^-1 (q - c - xi) + c
      const double dx = col - cx - spec.xi_x;
      const double dy = r - cy - spec.xi_y;
      double sx = c * dx + s * dy;
      const double sy = -s * dx + c * dy;
      if (spec.reflect) sx = -sx;
      out.at(r, col) = sample_bilinear(image, sx + cx, sy + cy);
    }
  }
  return out;
}

GraphSignal apply_general_isometry(const GraphSignal& signal, int height, int width, const TransformSpec& spec) {
  return apply_general_isometry(GrayImage::from_signal(signal, height, width), spec).to_signal();
}

}  // namespace tigranet
