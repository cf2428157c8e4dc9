#include "tigranet/layers/active_set.hpp"

#include <algorithm>
#include <stdexcept>

#include "tigranet/errors.hpp"

namespace tigranet {

ActiveSet::ActiveSet(Index num_nodes, std::vector<Index> nodes)
    : nodes_(std::move(nodes)), mask_(static_cast<std::size_t>(num_nodes), 0) {
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
  for (const Index v : nodes_) {
    if (v < 0 || v >= num_nodes) throw std::out_of_range("active node outside the graph");
    mask_[static_cast<std::size_t>(v)] = 1;
  }
}

ActiveSet ActiveSet::all(Index num_nodes) {
  std::vector<Index> nodes(static_cast<std::size_t>(num_nodes));
  for (Index v = 0; v < num_nodes; ++v) nodes[static_cast<std::size_t>(v)] = v;
  return ActiveSet(num_nodes, std::move(nodes));
}

void ActiveSet::apply_mask(GraphSignal& signal) const {
  if (signal.size() != num_nodes()) throw DimensionError("mask and signal sizes differ");
  for (Index v = 0; v < signal.size(); ++v) {
    if (!mask_[static_cast<std::size_t>(v)]) signal[v] = 0.0;
  }
}

GraphSignal ActiveSet::masked(const GraphSignal& signal) const {
  GraphSignal out = signal;
  apply_mask(out);
  return out;
}

}  // namespace tigranet
