#pragma once

#include <span>
#include <vector>

#include "tigranet/layers/network.hpp"

namespace tigranet {

struct ConvGradients {
  Eigen::MatrixXd d_alpha;
  Eigen::VectorXd d_beta;
  /// dE/dy_k for every input map; empty when not requested.
  SignalList d_inputs;
};

/// Backward pass of spectral_conv_forward given dE/dz_i for every output map.
/// With masked upstream u_i' = mask * u_i:
///   dE/dalpha(i,m) = sum_k beta_k <L^m y_k, u_i'>
///   dE/dbeta(k)    = sum_i sum_m alpha(i,m) <L^m y_k, u_i'>
///   dE/dy_k        = beta_k sum_m L^m (sum_i alpha(i,m) u_i')
/// Throws DimensionError when the cache does not match the layer.
ConvGradients spectral_conv_backward(const SpectralConvLayer& layer, const LaplacianPowers& powers,
                                     const SpectralConvCache& cache,
                                     std::span<const GraphSignal> upstream, bool want_inputs = true);

struct DenseGradients {
  Eigen::MatrixXd d_weights;
  Eigen::VectorXd d_biases;
  Eigen::VectorXd d_input;
};

DenseGradients dense_backward(const DenseLayer& layer, const Eigen::VectorXd& input,
                              const Eigen::VectorXd& upstream);

/// Passes upstream where pre > 0.
Eigen::VectorXd relu_backward(const Eigen::VectorXd& pre, const Eigen::VectorXd& upstream);

/// dE/dlogits for the softmax negative log-likelihood: p - onehot(label).
Eigen::VectorXd softmax_nll_backward(const Eigen::VectorXd& probabilities, int label);

/// Parameter gradients of a whole network, laid out like Network::parameters().
struct NetworkGradients {
  std::vector<Eigen::MatrixXd> d_alpha;
  std::vector<Eigen::VectorXd> d_beta;
  std::vector<Eigen::MatrixXd> d_weights;
  std::vector<Eigen::VectorXd> d_biases;

  static NetworkGradients zeros_like(const Network& network);
  NetworkGradients& operator+=(const NetworkGradients& other);
  NetworkGradients& operator*=(double scale);
  std::vector<ParameterView> views();
  bool all_finite() const;
};

struct LossAndGradients {
  double loss = 0.0;
  int predicted = 0;
  NetworkGradients gradients;
};

/// Forward and backward pass for a single labelled sample.
LossAndGradients network_backward(const Network& network, const GraphSignal& image, int label,
                                  VarianceGradient mode = VarianceGradient::Exact);

/// Backward pass from an existing forward cache.
LossAndGradients network_backward(const Network& network, const ForwardCache& cache, int label,
                                  VarianceGradient mode = VarianceGradient::Exact);

}  // namespace tigranet
