#pragma once

#include <vector>

#include "tigranet/types.hpp"

namespace tigranet {

/// Ordered set of graph nodes with an O(1) membership mask.
class ActiveSet {
 public:
  ActiveSet() = default;
  /// Nodes are sorted and deduplicated; each must be in [0, num_nodes).
  ActiveSet(Index num_nodes, std::vector<Index> nodes);

  static ActiveSet all(Index num_nodes);

  Index num_nodes() const { return static_cast<Index>(mask_.size()); }
  Index size() const { return static_cast<Index>(nodes_.size()); }
  bool empty() const { return nodes_.empty(); }
  bool contains(Index node) const { return mask_[static_cast<std::size_t>(node)] != 0; }
  const std::vector<Index>& nodes() const { return nodes_; }

  /// Zeroes every entry of `signal` outside the set.
  void apply_mask(GraphSignal& signal) const;
  GraphSignal masked(const GraphSignal& signal) const;

  bool operator==(const ActiveSet& other) const { return nodes_ == other.nodes_ && mask_ == other.mask_; }

 private:
  std::vector<Index> nodes_;
  std::vector<unsigned char> mask_;
};

}  // namespace tigranet
