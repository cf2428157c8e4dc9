#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "tigranet/grid_graph.hpp"

namespace tigranet {

enum class Split { Train, Validation, Test };

const char* to_string(Split split);

/// Transform applied to one sample when the split was generated.
struct SampleTransform {
  double rotation = 0.0;  ///< radians, about the image center
  int shift_x = 0;        ///< columns, positive to the right
  int shift_y = 0;        ///< rows, positive downward
};

/// Signals on one shared grid with integer class labels. Pixel values are
/// normalized to [0, 1].
struct LabeledSignalSet {
  SignalList signals;
  std::vector<int> labels;
  Split split = Split::Train;
  std::shared_ptr<const GridGraph> grid;
  int num_classes = 0;
  /// Index of each sample in the source collection it was drawn from.
  std::vector<std::int64_t> source_indices;
  /// Empty when no transform was applied; otherwise one entry per sample.
  std::vector<SampleTransform> transforms;

  std::size_t size() const { return signals.size(); }
  bool empty() const { return signals.empty(); }
};

}  // namespace tigranet
