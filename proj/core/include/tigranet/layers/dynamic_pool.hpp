#pragma once

#include <span>
#include <vector>

#include "tigranet/layers/active_set.hpp"

namespace tigranet {

/// Node sets selected by one dynamic pooling layer.
struct PoolState {
  /// per_filter_nodes[i]: the selected nodes for map i, sorted ascending.
  std::vector<std::vector<Index>> per_filter_nodes;
  /// Union of the per-map selections; drives the next layer.
  ActiveSet union_nodes;
  int budget = 0;
};

struct PoolOutput {
  PoolState state;
  /// Input maps with non-selected nodes zeroed (per map).
  SignalList maps;
};

/// For each map keeps the min(budget, |prev_active|) nodes of prev_active with
/// the largest values; ties go to the lowest node index. Selection is an
/// average O(N) nth_element under that strict total order.
///
/// Throws std::invalid_argument for budget < 1 or an empty prev_active.
PoolOutput dynamic_pool(std::span<const GraphSignal> maps, const ActiveSet& prev_active, int budget);

/// Routes upstream gradients through the selected nodes only.
SignalList dynamic_pool_backward(const PoolState& state, std::span<const GraphSignal> upstream);

}  // namespace tigranet
