#include "tigranet/layers/statistical.hpp"

#include <cmath>
#include <stdexcept>

#include "tigranet/errors.hpp"

namespace tigranet {

Eigen::VectorXd FeatureStats::flattened() const {
  Eigen::VectorXd out(phi.size());
  Index pos = 0;
  for (Index i = 0; i < phi.rows(); ++i) {
    for (Index j = 0; j < phi.cols(); ++j) out[pos++] = phi(i, j);
  }
  return out;
}

GraphSignal shifted_laplacian_apply(const GridGraph& graph, const GraphSignal& signal) {
  GraphSignal out = graph.laplacian() * signal;
  out -= signal;
  return out;
}

StatisticalCache statistical_forward(std::span<const GraphSignal> maps, const GridGraph& graph,
                                     int max_order) {
  if (max_order < 0) throw std::invalid_argument("Chebyshev order must be >= 0");
  const Index n = graph.num_nodes();
  const double inv_n = 1.0 / static_cast<double>(n);

  StatisticalCache cache;
  cache.stats.phi.resize(static_cast<Index>(maps.size()), 2 * (max_order + 1));
  cache.chebyshev.reserve(maps.size());
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (maps[i].size() != n) throw DimensionError("statistical layer: map length mismatch");
    SignalList t;
    t.reserve(static_cast<std::size_t>(max_order) + 1);
    t.push_back(maps[i]);
    if (max_order >= 1) t.push_back(shifted_laplacian_apply(graph, maps[i]));
    for (int k = 2; k <= max_order; ++k) {
      GraphSignal next = 2.0 * shifted_laplacian_apply(graph, t[static_cast<std::size_t>(k - 1)]);
      next -= t[static_cast<std::size_t>(k - 2)];
      t.push_back(std::move(next));
    }
    for (int k = 0; k <= max_order; ++k) {
      const Eigen::ArrayXd magnitude = t[static_cast<std::size_t>(k)].array().abs();
      const double mu = magnitude.sum() * inv_n;
      const double var = (magnitude - mu).square().sum() * inv_n;
      cache.stats.phi(static_cast<Index>(i), 2 * k) = mu;
      cache.stats.phi(static_cast<Index>(i), 2 * k + 1) = var;
    }
    cache.chebyshev.push_back(std::move(t));
  }
  return cache;
}

namespace {
double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }
}  // namespace

std::vector<SignalList> statistical_output_gradients(const StatisticalCache& cache,
                                                     const Eigen::MatrixXd& d_phi,
                                                     VarianceGradient mode) {
  const auto& phi = cache.stats.phi;
  if (d_phi.rows() != phi.rows() || d_phi.cols() != phi.cols()) {
    throw DimensionError("statistical backward: upstream shape does not match the forward pass");
  }
  std::vector<SignalList> grads;
  grads.reserve(cache.chebyshev.size());
  for (std::size_t i = 0; i < cache.chebyshev.size(); ++i) {
    const auto& t = cache.chebyshev[i];
    const auto n = static_cast<double>(t.front().size());
    const double var_scale = mode == VarianceGradient::Exact ? 2.0 / n : 2.0 * (n - 1.0) / (n * n);
    SignalList g;
    g.reserve(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
      const auto row = static_cast<Index>(i);
      const auto col = static_cast<Index>(2 * k);
      const double d_mu = d_phi(row, col);
      const double d_var = d_phi(row, col + 1);
      const double mu = phi(row, col);
      GraphSignal gk(t[k].size());
      for (Index v = 0; v < gk.size(); ++v) {
        const double x = t[k][v];
        gk[v] = sign_of(x) * (d_mu / n + var_scale * (std::abs(x) - mu) * d_var);
      }
      g.push_back(std::move(gk));
    }
    grads.push_back(std::move(g));
  }
  return grads;
}

SignalList statistical_backward(const StatisticalCache& cache, const GridGraph& graph,
                                const Eigen::MatrixXd& d_phi, VarianceGradient mode) {
  auto adjoint = statistical_output_gradients(cache, d_phi, mode);
  SignalList out;
  out.reserve(adjoint.size());
  for (auto& a : adjoint) {
    // Reverse the recursion: t_k feeds t_{k-1} through 2(L - I) and t_{k-2}
    // through -I; t_1 feeds t_0 through (L - I). (L - I) is symmetric.
    for (std::size_t k = a.size() - 1; k >= 2; --k) {
      a[k - 1] += 2.0 * shifted_laplacian_apply(graph, a[k]);
      a[k - 2] -= a[k];
    }
    if (a.size() >= 2) a[0] += shifted_laplacian_apply(graph, a[1]);
    out.push_back(std::move(a[0]));
  }
  return out;
}

}  // namespace tigranet
