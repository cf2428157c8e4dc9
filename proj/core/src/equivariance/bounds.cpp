#include "tigranet/equivariance/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tigranet {

double polynomial_bound_weight(std::span<const double> alpha) {
  double w = 0.0;
  for (std::size_t k = 1; k < alpha.size(); ++k) w += std::abs(alpha[k]) * std::ldexp(1.0, static_cast<int>(k) - 3);
  return w;
}

double rotation_z_bar(const GrayImage& f) {
  if (f.height < 3 || f.width < 3) throw std::invalid_argument("rotation bound needs an image of at least 3x3");
  double z = 0.0;
  for (int r = 1; r + 1 < f.height; ++r) {
    for (int c = 1; c + 1 < f.width; ++c) {
      const double daa = f.at(r, c + 1) - 2.0 * f.at(r, c) + f.at(r, c - 1);
      const double dbb = f.at(r + 1, c) - 2.0 * f.at(r, c) + f.at(r - 1, c);
      z = std::max(z, std::abs(daa) + std::abs(dbb));
    }
  }
  return z;
}

double translation_z_bar(const GrayImage& f) {
  if (f.height < 5 || f.width < 5) throw std::invalid_argument("translation bound needs an image of at least 5x5");
  double z = 0.0;
  for (int r = 2; r + 2 < f.height; ++r) {
    for (int c = 2; c + 2 < f.width; ++c) {
      const double daaa = (f.at(r, c + 2) - 2.0 * f.at(r, c + 1) + 2.0 * f.at(r, c - 1) - f.at(r, c - 2)) / 2.0;
      const double dbbb = (f.at(r + 2, c) - 2.0 * f.at(r + 1, c) + 2.0 * f.at(r - 1, c) - f.at(r - 2, c)) / 2.0;
      const auto dbb = [&](int col) { return f.at(r + 1, col) - 2.0 * f.at(r, col) + f.at(r - 1, col); };
      const auto daa = [&](int row) { return f.at(row, c + 1) - 2.0 * f.at(row, c) + f.at(row, c - 1); };
      const double dabb = (dbb(c + 1) - dbb(c - 1)) / 2.0;
      const double dbaa = (daa(r + 1) - daa(r - 1)) / 2.0;
      z = std::max(z, std::abs(daaa) + std::abs(dbbb) + std::abs(dabb) + std::abs(dbaa));
    }
  }
  return z;
}

double rotation_angle_factor(double gamma) {
  constexpr double quarter = std::numbers::pi / 2.0;
  const double r = std::abs(gamma - std::round(gamma / quarter) * quarter);
  return std::abs(1.0 - std::sin(r) - std::cos(r));
}

double rotation_bound(std::span<const double> alpha, const GrayImage& image, double gamma) {
  return polynomial_bound_weight(alpha) * rotation_angle_factor(gamma) * rotation_z_bar(image);
}

double translation_bound(std::span<const double> alpha, const GrayImage& image, double xi_x, double xi_y) {
  if (xi_x == std::round(xi_x) && xi_y == std::round(xi_y)) return 0.0;
  return polynomial_bound_weight(alpha) * translation_z_bar(image);
}

ResolutionBound resolution_for_epsilon(const GrayImage& f, double gamma, double eps_def) {
  if (!(eps_def > 0.0)) throw std::invalid_argument("eps_def must be positive");
  if (f.height < 3 || f.width < 3) throw std::invalid_argument("resolution bound needs an image of at least 3x3");
  ResolutionBound out;
  const double factor = rotation_angle_factor(gamma);
  double daa_max = 0.0;
  double dbb_max = 0.0;
  for (int r = 1; r + 1 < f.height; ++r) {
    for (int c = 1; c + 1 < f.width; ++c) {
      daa_max = std::max(daa_max, std::abs(f.at(r, c + 1) - 2.0 * f.at(r, c) + f.at(r, c - 1)));
      dbb_max = std::max(dbb_max, std::abs(f.at(r + 1, c) - 2.0 * f.at(r, c) + f.at(r - 1, c)));
    }
  }
  // Second derivatives on the unit square: f_aa = D^2 / da^2 with da = 1 / width.
  const double faa = daa_max * f.width * f.width;
  const double fbb = dbb_max * f.height * f.height;
  if (factor < 1e-12 || faa == 0.0 || fbb == 0.0) {
    out.unbounded = true;
    return out;
  }
  out.delta_a = std::sqrt(eps_def / 2.0 / (faa * factor));
  out.delta_b = std::sqrt(eps_def / 2.0 / (fbb * factor));
  return out;
}

}  // namespace tigranet
