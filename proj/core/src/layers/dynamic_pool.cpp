#include "tigranet/layers/dynamic_pool.hpp"

#include <algorithm>
#include <stdexcept>

#include "tigranet/errors.hpp"

namespace tigranet {

PoolOutput dynamic_pool(std::span<const GraphSignal> maps, const ActiveSet& prev_active, int budget) {
  if (budget < 1) throw std::invalid_argument("pooling budget must be >= 1");
  if (prev_active.empty()) throw std::invalid_argument("pooling needs a nonempty candidate set");

  const Index n = prev_active.num_nodes();
  const auto keep = static_cast<std::size_t>(std::min<Index>(budget, prev_active.size()));

  PoolOutput out;
  out.state.budget = budget;
  out.state.per_filter_nodes.reserve(maps.size());
  out.maps.reserve(maps.size());

  std::vector<Index> merged;
  std::vector<Index> candidates;
  for (const auto& z : maps) {
    if (z.size() != n) throw DimensionError("feature map length does not match the active set");
    candidates = prev_active.nodes();
    const auto ranks_before = [&z](Index a, Index b) {
      return z[a] > z[b] || (z[a] == z[b] && a < b);
    };
    if (keep < candidates.size()) {
      std::nth_element(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                       candidates.end(), ranks_before);
      candidates.resize(keep);
    }
    std::sort(candidates.begin(), candidates.end());

    GraphSignal pooled = GraphSignal::Zero(n);
    for (const Index v : candidates) pooled[v] = z[v];
    out.maps.push_back(std::move(pooled));
    merged.insert(merged.end(), candidates.begin(), candidates.end());
    out.state.per_filter_nodes.push_back(candidates);
  }
  out.state.union_nodes = ActiveSet(n, std::move(merged));
  return out;
}

SignalList dynamic_pool_backward(const PoolState& state, std::span<const GraphSignal> upstream) {
  if (upstream.size() != state.per_filter_nodes.size()) {
    throw DimensionError("pool backward: map count does not match the forward pass");
  }
  SignalList out;
  out.reserve(upstream.size());
  for (std::size_t i = 0; i < upstream.size(); ++i) {
    if (upstream[i].size() != state.union_nodes.num_nodes()) {
      throw DimensionError("pool backward: gradient length does not match the graph");
    }
    GraphSignal g = GraphSignal::Zero(upstream[i].size());
    for (const Index v : state.per_filter_nodes[i]) g[v] = upstream[i][v];
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace tigranet
