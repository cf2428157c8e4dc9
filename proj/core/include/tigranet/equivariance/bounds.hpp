#pragma once

#include <span>

#include "tigranet/imaging/image.hpp"

namespace tigranet {

/// sum_{k>=1} |alpha_k| 2^(k-3); the degree-0 term carries no budget.
double polynomial_bound_weight(std::span<const double> alpha);

/// Rotation smoothness term: max over pixels of |f_aa| da^2 + |f_bb| db^2
/// with central second differences on the unit-square parameterization
/// (da = 1 / width, db = 1 / height), i.e. raw lattice second differences.
/// Throws std::invalid_argument for images smaller than 3x3.
double rotation_z_bar(const GrayImage& image);

/// Translation smoothness term: max over pixels of
/// |f_aaa| da^3 + |f_bbb| db^3 + |f_abb| da db^2 + |f_baa| db da^2 with
/// central third and mixed differences. Throws for images smaller than 5x5.
double translation_z_bar(const GrayImage& image);

/// |1 - sin r - cos r| for the residual r = gamma - gbar (taken as |r|),
/// where gbar is the nearest multiple of pi/2.
double rotation_angle_factor(double gamma);

/// weight(alpha) * rotation_angle_factor(gamma) * rotation_z_bar(image).
double rotation_bound(std::span<const double> alpha, const GrayImage& image, double gamma);

/// weight(alpha) * translation_z_bar(image); 0 when both shifts are integral.
double translation_bound(std::span<const double> alpha, const GrayImage& image, double xi_x, double xi_y);

struct ResolutionBound {
  bool unbounded = false;
  double delta_a = 0.0;
  double delta_b = 0.0;
};

/// Largest grid spacings keeping the degree-1 rotation gap under eps_def:
/// delta = sqrt((eps_def / 2) / |f_xx,max * (1 - sin r - cos r)|) per axis,
/// with second derivatives taken from the image on the unit square and the
/// remainder terms dropped. Unbounded at graph-isometric angles or on images
/// with vanishing second differences. Throws for eps_def <= 0.
ResolutionBound resolution_for_epsilon(const GrayImage& image, double gamma, double eps_def);

}  // namespace tigranet
