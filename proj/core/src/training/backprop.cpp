#include "tigranet/training/backprop.hpp"

#include <fmt/format.h>

#include "tigranet/errors.hpp"
#include "tigranet/layers/softmax.hpp"

namespace tigranet {

ConvGradients spectral_conv_backward(const SpectralConvLayer& layer, const LaplacianPowers& powers,
                                     const SpectralConvCache& cache,
                                     std::span<const GraphSignal> upstream, bool want_inputs) {
  const int filters = layer.num_filters();
  const int inputs = layer.num_inputs();
  const int degree = layer.degree();
  if (static_cast<int>(upstream.size()) != filters) {
    throw DimensionError("conv backward: upstream count does not match the filter count");
  }
  if (static_cast<int>(cache.monomials.size()) != inputs) {
    throw DimensionError("conv backward: cache does not match the layer inputs");
  }
  const Index n = cache.active.num_nodes();

  SignalList masked;
  masked.reserve(upstream.size());
  for (const auto& u : upstream) {
    if (u.size() != n) throw DimensionError("conv backward: upstream length mismatch");
    masked.push_back(cache.active.masked(u));
  }

  ConvGradients g;
  g.d_alpha = Eigen::MatrixXd::Zero(filters, degree + 1);
  g.d_beta = Eigen::VectorXd::Zero(inputs);
  for (int k = 0; k < inputs; ++k) {
    const auto& mono = cache.monomials[static_cast<std::size_t>(k)];
    if (static_cast<int>(mono.size()) != degree + 1) {
      throw DimensionError("conv backward: cache degree does not match the layer");
    }
    for (int i = 0; i < filters; ++i) {
      for (int m = 0; m <= degree; ++m) {
        const double inner = mono[static_cast<std::size_t>(m)].dot(masked[static_cast<std::size_t>(i)]);
        g.d_alpha(i, m) += layer.beta[k] * inner;
        g.d_beta[k] += layer.alpha(i, m) * inner;
      }
    }
  }

  if (want_inputs) {
    // w_m = sum_i alpha(i,m) u_i'; then sum_m L^m w_m by Horner.
    GraphSignal acc = GraphSignal::Zero(n);
    for (int m = degree; m >= 0; --m) {
      if (m < degree) acc = powers[1] * acc;
      for (int i = 0; i < filters; ++i) acc.noalias() += layer.alpha(i, m) * masked[static_cast<std::size_t>(i)];
    }
    g.d_inputs.reserve(static_cast<std::size_t>(inputs));
    for (int k = 0; k < inputs; ++k) g.d_inputs.push_back(layer.beta[k] * acc);
  }
  return g;
}

DenseGradients dense_backward(const DenseLayer& layer, const Eigen::VectorXd& input,
                              const Eigen::VectorXd& upstream) {
  if (input.size() != layer.inputs() || upstream.size() != layer.outputs()) {
    throw DimensionError("dense backward: shape mismatch");
  }
  DenseGradients g;
  g.d_weights = upstream * input.transpose();
  g.d_biases = upstream;
  g.d_input = layer.weights.transpose() * upstream;
  return g;
}

Eigen::VectorXd relu_backward(const Eigen::VectorXd& pre, const Eigen::VectorXd& upstream) {
  if (pre.size() != upstream.size()) throw DimensionError("relu backward: shape mismatch");
  return (pre.array() > 0.0).select(upstream, 0.0);
}

Eigen::VectorXd softmax_nll_backward(const Eigen::VectorXd& probabilities, int label) {
  if (label < 0 || label >= probabilities.size()) throw std::out_of_range("label outside the class range");
  Eigen::VectorXd g = probabilities;
  g[label] -= 1.0;
  return g;
}

NetworkGradients NetworkGradients::zeros_like(const Network& network) {
  NetworkGradients g;
  for (const auto& c : network.conv) {
    g.d_alpha.push_back(Eigen::MatrixXd::Zero(c.alpha.rows(), c.alpha.cols()));
    g.d_beta.push_back(Eigen::VectorXd::Zero(c.beta.size()));
  }
  for (const auto& d : network.dense) {
    g.d_weights.push_back(Eigen::MatrixXd::Zero(d.weights.rows(), d.weights.cols()));
    g.d_biases.push_back(Eigen::VectorXd::Zero(d.biases.size()));
  }
  return g;
}

NetworkGradients& NetworkGradients::operator+=(const NetworkGradients& other) {
  for (std::size_t l = 0; l < d_alpha.size(); ++l) {
    d_alpha[l] += other.d_alpha[l];
    d_beta[l] += other.d_beta[l];
  }
  for (std::size_t j = 0; j < d_weights.size(); ++j) {
    d_weights[j] += other.d_weights[j];
    d_biases[j] += other.d_biases[j];
  }
  return *this;
}

NetworkGradients& NetworkGradients::operator*=(double scale) {
  for (auto& v : views()) Eigen::Map<Eigen::VectorXd>(v.data, v.size) *= scale;
  return *this;
}

std::vector<ParameterView> NetworkGradients::views() {
  std::vector<ParameterView> out;
  for (std::size_t l = 0; l < d_alpha.size(); ++l) {
    out.push_back({fmt::format("sc{}.alpha", l), "alpha", d_alpha[l].data(), d_alpha[l].size()});
    out.push_back({fmt::format("sc{}.beta", l), "beta", d_beta[l].data(), d_beta[l].size()});
  }
  for (std::size_t j = 0; j < d_weights.size(); ++j) {
    out.push_back({fmt::format("fc{}.weights", j), "fc", d_weights[j].data(), d_weights[j].size()});
    out.push_back({fmt::format("fc{}.biases", j), "fc", d_biases[j].data(), d_biases[j].size()});
  }
  return out;
}

bool NetworkGradients::all_finite() const {
  for (const auto& v : const_cast<NetworkGradients*>(this)->views()) {
    if (!Eigen::Map<const Eigen::VectorXd>(v.data, v.size).allFinite()) return false;
  }
  return true;
}

LossAndGradients network_backward(const Network& network, const GraphSignal& image, int label,
                                  VarianceGradient mode) {
  return network_backward(network, network.forward(image), label, mode);
}

LossAndGradients network_backward(const Network& network, const ForwardCache& cache, int label,
                                  VarianceGradient mode) {
  LossAndGradients out;
  out.gradients = NetworkGradients::zeros_like(network);
  auto& grads = out.gradients;

  const auto head = softmax_nll(cache.logits, label);
  out.loss = head.loss;
  Index predicted = 0;
  cache.logits.maxCoeff(&predicted);
  out.predicted = static_cast<int>(predicted);

  Eigen::VectorXd upstream = softmax_nll_backward(head.probabilities, label);
  for (std::size_t j = network.dense.size(); j-- > 0;) {
    if (j + 1 < network.dense.size()) upstream = relu_backward(cache.pre_activations[j], upstream);
    auto d = dense_backward(network.dense[j], cache.dense_inputs[j], upstream);
    grads.d_weights[j] = std::move(d.d_weights);
    grads.d_biases[j] = std::move(d.d_biases);
    upstream = std::move(d.d_input);
  }

  const auto& phi = cache.stats.stats.phi;
  Eigen::MatrixXd d_phi(phi.rows(), phi.cols());
  for (Index i = 0, pos = 0; i < phi.rows(); ++i) {
    for (Index c = 0; c < phi.cols(); ++c) d_phi(i, c) = upstream[pos++];
  }
  SignalList d_maps = statistical_backward(cache.stats, network.graph(), d_phi, mode);

  for (std::size_t l = network.conv.size(); l-- > 0;) {
    if (const auto& pool = cache.pools[l]) d_maps = dynamic_pool_backward(*pool, d_maps);
    auto g = spectral_conv_backward(network.conv[l], network.powers(), cache.conv[l], d_maps, l > 0);
    grads.d_alpha[l] = std::move(g.d_alpha);
    grads.d_beta[l] = std::move(g.d_beta);
    d_maps = std::move(g.d_inputs);
  }
  return out;
}

}  // namespace tigranet
