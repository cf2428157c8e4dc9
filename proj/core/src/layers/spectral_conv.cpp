#include "tigranet/layers/spectral_conv.hpp"

#include <stdexcept>
#include <string>

#include "tigranet/errors.hpp"

namespace tigranet {

SpectralConvLayer::SpectralConvLayer(int num_inputs, int num_filters, int degree)
    : alpha(Eigen::MatrixXd::Zero(num_filters, degree + 1)), beta(Eigen::VectorXd::Zero(num_inputs)) {
  if (num_inputs < 1 || num_filters < 1 || degree < 0) {
    throw std::invalid_argument("spectral conv layer needs >=1 input, >=1 filter and degree >= 0");
  }
}

SpectralConvOutput spectral_conv_forward(const SpectralConvLayer& layer, const LaplacianPowers& powers,
                                         std::span<const GraphSignal> inputs,
                                         const ActiveSet& active) {
  if (static_cast<int>(inputs.size()) != layer.num_inputs()) {
    throw DimensionError("spectral conv expects " + std::to_string(layer.num_inputs()) +
                         " input maps, got " + std::to_string(inputs.size()));
  }
  if (active.empty()) throw std::invalid_argument("spectral conv needs a nonempty active set");
  if (layer.degree() > powers.max_degree()) {
    throw DimensionError("layer degree exceeds the precomputed Laplacian powers");
  }
  const Index n = powers[0].rows();
  if (active.num_nodes() != n) throw DimensionError("active set does not match the graph");

  SpectralConvOutput out;
  out.cache.active = active;
  out.cache.monomials.reserve(inputs.size());
  for (const auto& y : inputs) {
    if (y.size() != n) throw DimensionError("input map length does not match the graph");
    SignalList mono{y};
    mono.reserve(static_cast<std::size_t>(layer.degree()) + 1);
    for (int m = 1; m <= layer.degree(); ++m) mono.push_back(powers[1] * mono.back());
    out.cache.monomials.push_back(std::move(mono));
  }

  // F_i is a polynomial in the symmetric L, hence symmetric, so the transpose
  // of its column restriction applied to y equals mask * (F_i y).
  out.maps.reserve(static_cast<std::size_t>(layer.num_filters()));
  for (int i = 0; i < layer.num_filters(); ++i) {
    GraphSignal z = GraphSignal::Zero(n);
    for (int k = 0; k < layer.num_inputs(); ++k) {
      const auto& mono = out.cache.monomials[static_cast<std::size_t>(k)];
      for (int m = 0; m <= layer.degree(); ++m) {
        z.noalias() += (layer.beta[k] * layer.alpha(i, m)) * mono[static_cast<std::size_t>(m)];
      }
    }
    active.apply_mask(z);
    out.maps.push_back(std::move(z));
  }
  return out;
}

GraphSignal apply_polynomial_filter(const LaplacianPowers& powers, std::span<const double> alpha,
                                    const GraphSignal& signal) {
  if (alpha.empty()) throw std::invalid_argument("filter needs at least one coefficient");
  if (static_cast<int>(alpha.size()) - 1 > powers.max_degree()) {
    throw DimensionError("filter degree exceeds the precomputed Laplacian powers");
  }
  // Horner: ((a_M L + a_{M-1}) L + ...) y
  GraphSignal acc = alpha.back() * signal;
  for (auto m = static_cast<std::ptrdiff_t>(alpha.size()) - 2; m >= 0; --m) {
    GraphSignal next = powers[1] * acc;
    next.noalias() += alpha[static_cast<std::size_t>(m)] * signal;
    acc = std::move(next);
  }
  return acc;
}

SparseMatrix polynomial_filter_operator(const LaplacianPowers& powers, std::span<const double> alpha) {
  if (static_cast<int>(alpha.size()) - 1 > powers.max_degree()) {
    throw DimensionError("filter degree exceeds the precomputed Laplacian powers");
  }
  SparseMatrix op(powers[0].rows(), powers[0].cols());
  for (std::size_t m = 0; m < alpha.size(); ++m) op += alpha[m] * powers[static_cast<int>(m)];
  return op;
}

}  // namespace tigranet
