#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tigranet/grid_graph.hpp"

namespace tigranet {

/// Per-map statistics phi_i = [mu_0, var_0, ..., mu_K, var_K] of |t_{i,k}|
/// where t_{i,0} = z_i, t_{i,1} = (L - I) z_i and
/// t_{i,k} = 2 (L - I) t_{i,k-1} - t_{i,k-2}.
/// Moments are taken over all N nodes with the population (divide-by-N) variance.
struct FeatureStats {
  /// One row per input map, 2 * (max_order + 1) columns.
  Eigen::MatrixXd phi;

  int max_order() const { return static_cast<int>(phi.cols() / 2) - 1; }
  double mean(int map, int order) const { return phi(map, 2 * order); }
  double variance(int map, int order) const { return phi(map, 2 * order + 1); }
  /// Row-major concatenation of all phi_i, as fed to the first dense layer.
  Eigen::VectorXd flattened() const;
};

struct StatisticalCache {
  /// chebyshev[i][k] = t_{i,k}.
  std::vector<SignalList> chebyshev;
  FeatureStats stats;
};

/// Applies the shifted Laplacian (L - I) without forming it.
GraphSignal shifted_laplacian_apply(const GridGraph& graph, const GraphSignal& signal);

/// Throws std::invalid_argument for max_order < 0.
StatisticalCache statistical_forward(std::span<const GraphSignal> maps, const GridGraph& graph,
                                     int max_order);

/// How the variance path maps dE/dvar onto dE/dt.
enum class VarianceGradient {
  /// Derivative of the population variance: (2/N)(|t| - mu).
  Exact,
  /// Exact gradient scaled by (N-1)/N: 2(N-1)/N^2 (|t| - mu).
  Scaled,
};

/// dE/dt_{i,k} for each map and order (before the Chebyshev recursion).
/// The mean and variance paths add; sign(0) is taken as 0.
std::vector<SignalList> statistical_output_gradients(const StatisticalCache& cache,
                                                     const Eigen::MatrixXd& d_phi,
                                                     VarianceGradient mode);

/// Full backward pass: dE/dz_i for every input map.
SignalList statistical_backward(const StatisticalCache& cache, const GridGraph& graph,
                                const Eigen::MatrixXd& d_phi, VarianceGradient mode);

}  // namespace tigranet
