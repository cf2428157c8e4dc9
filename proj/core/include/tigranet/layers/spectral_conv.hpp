#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tigranet/grid_graph.hpp"
#include "tigranet/layers/active_set.hpp"

namespace tigranet {

/// Spectral convolution layer: K_l polynomial filters F_i = sum_m alpha(i,m) L^m
/// and one mixing weight beta(k) per input map. Output map i is
///   z_i = sum_k beta(k) [F_i restricted to the active columns]^T y_k.
/// There is no pointwise nonlinearity after this layer.
struct SpectralConvLayer {
  Eigen::MatrixXd alpha;  ///< num_filters x (degree + 1)
  Eigen::VectorXd beta;   ///< num_inputs

  SpectralConvLayer() = default;
  SpectralConvLayer(int num_inputs, int num_filters, int degree);

  int num_filters() const { return static_cast<int>(alpha.rows()); }
  int degree() const { return static_cast<int>(alpha.cols()) - 1; }
  int num_inputs() const { return static_cast<int>(beta.size()); }
};

/// Values kept from the forward pass for backpropagation.
struct SpectralConvCache {
  /// monomials[k][m] = L^m y_k (unmasked).
  std::vector<SignalList> monomials;
  ActiveSet active;
};

struct SpectralConvOutput {
  SignalList maps;
  SpectralConvCache cache;
};

/// Throws DimensionError when the input count differs from num_inputs() and
/// std::invalid_argument when the active set is empty.
SpectralConvOutput spectral_conv_forward(const SpectralConvLayer& layer, const LaplacianPowers& powers,
                                         std::span<const GraphSignal> inputs,
                                         const ActiveSet& active);

/// Applies a single polynomial filter sum_m alpha[m] L^m to a signal.
GraphSignal apply_polynomial_filter(const LaplacianPowers& powers, std::span<const double> alpha,
                                    const GraphSignal& signal);

/// Same filter as an explicit sparse operator built from the stored powers.
SparseMatrix polynomial_filter_operator(const LaplacianPowers& powers, std::span<const double> alpha);

}  // namespace tigranet
