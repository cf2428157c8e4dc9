#pragma once

#include <cstdint>
#include <utility>

#include <Eigen/Dense>

#include "tigranet/layers/network.hpp"

namespace tigranet {

/// Overlapping rectangular windows tiling [lo, hi], each approximated by a
/// degree-M polynomial.
struct InitSpec {
  int num_windows = 1;
  int degree = 0;
  double lo = 0.0;
  double hi = 2.0;
  int samples = 256;
};

/// Window i of Z: width 2 (hi - lo) / (Z + 1), starting at i * width / 2.
std::pair<double, double> init_window(const InitSpec& spec, int index);

/// Sample points lo + (j + 1/2) (hi - lo) / samples, j = 0..samples-1.
Eigen::VectorXd init_sample_grid(const InitSpec& spec);

/// Row i: least-squares polynomial fit of window i's indicator on the sample
/// grid (normal equations with ridge 1e-8). Throws std::invalid_argument for
/// Z < 1, M < 0 or samples < M + 1.
Eigen::MatrixXd init_spectral_filters(const InitSpec& spec);

/// beta ~ U[0, 1], FC weights and biases ~ U[-1, 1].
void init_dense_and_beta(Network& network, std::uint64_t seed);

/// Window-fit alphas for every conv block plus init_dense_and_beta.
void init_network(Network& network, std::uint64_t seed);

}  // namespace tigranet
