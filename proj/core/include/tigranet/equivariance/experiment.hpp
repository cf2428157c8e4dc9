#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tigranet/equivariance/transform.hpp"
#include "tigranet/grid_graph.hpp"

namespace tigranet {

enum class TransformFamily { Rotation, Translation };

const char* to_string(TransformFamily family);

struct GapTransform {
  TransformFamily family;
  /// Radians for rotations, pixels (applied to both axes) for translations.
  double param;
  TransformSpec spec() const;
};

/// Rotations pi/18, pi/9, pi/6, pi/4 and diagonal shifts 0.1 .. 0.4 px.
std::vector<GapTransform> default_gap_transforms();

struct GapExperimentConfig {
  std::vector<int> factors{2, 3, 4, 5, 6};
  int num_filters = 20;
  int degree = 4;
  double coeff_lo = -1.0;
  double coeff_hi = 1.0;
  std::uint64_t seed = 0;
  Connectivity connectivity = Connectivity::EightNN;
  std::vector<GapTransform> transforms = default_gap_transforms();
  int threads = 1;
};

/// One CSV row: aggregate over images and filters for a factor and transform.
/// transform_param is the formatted parameter or "all" for a family mean.
struct GapRow {
  int t = 0;
  TransformFamily family = TransformFamily::Rotation;
  std::string transform_param;
  double mean_gap = 0.0;
  double max_gap = 0.0;
  double bound = 0.0;
  double violation_rate = 0.0;
};

struct GapReport {
  std::vector<GapRow> rows;
  /// per_image_rotation[i][j]: image i's rotation-family mean gap at factors[j].
  std::vector<std::vector<double>> per_image_rotation;
  std::vector<int> factors;

  /// Family mean ("all" row) at factor t.
  double family_mean(TransformFamily family, int t) const;
  /// Corpus-mean rotation gap never decreases as t grows.
  bool rotation_monotone() const;
  /// Translation family mean is below the rotation family mean at every t.
  bool translation_below_rotation() const;
  /// Fraction of images whose own rotation gap is non-decreasing in t.
  double per_image_monotone_fraction() const;
};

/// For each image y and factor t: y_t = downsample_bicubic(y, t); for each of
/// num_filters random filters F and transform T the gap
/// T^-1(F(T y_t)) - F(y_t) is summarized by its mean and max absolute value
/// over the disk of radius R - (M + 2) sqrt(2) - 1 about the center,
/// R = (n - 1) / 2. The same filters are used for every image and factor.
/// Throws std::invalid_argument on an empty image set.
GapReport mean_gap_experiment(const std::vector<GrayImage>& images, const GapExperimentConfig& config);

/// Writes t,transform_family,transform_param,mean_gap,max_gap,bound,violation_rate.
void write_gap_csv(const std::filesystem::path& path, const GapReport& report, const std::string& header_comment);

struct DominanceConfig {
  int size = 32;
  int trials = 1000;
  int max_degree = 3;
  std::uint64_t seed = 0;
  Connectivity connectivity = Connectivity::FourNN;
  /// Translation trials measure the filter without its degree-0 term.
  bool drop_constant_term = true;
  int threads = 1;
};

struct DominanceResult {
  TransformFamily family = TransformFamily::Rotation;
  int trials = 0;
  int violations = 0;
  double max_ratio = 0.0;
  double median_ratio = 0.0;
  double violation_rate() const { return trials > 0 ? static_cast<double>(violations) / trials : 0.0; }
};

/// Random smooth images (Gaussian bumps or cubic polynomials) and random
/// filters of degree 1..max_degree. Rotation trials take the worst vertex
/// gap over 6 vertices near the center (rotation about the vertex, gamma in
/// pi/18, pi/9, pi/6) against rotation_bound.
DominanceResult rotation_dominance(const DominanceConfig& config);

/// Translation trials take the interior max gap (margin M + 2) for diagonal
/// shifts 0.1 .. 0.4 px against translation_bound.
DominanceResult translation_dominance(const DominanceConfig& config);

}  // namespace tigranet
