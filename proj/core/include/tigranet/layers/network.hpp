#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tigranet/grid_graph.hpp"
#include "tigranet/layers/architecture.hpp"
#include "tigranet/layers/dense.hpp"
#include "tigranet/layers/dynamic_pool.hpp"
#include "tigranet/layers/spectral_conv.hpp"
#include "tigranet/layers/statistical.hpp"

namespace tigranet {

/// Everything the backward pass needs from one forward evaluation.
struct ForwardCache {
  /// conv_inputs[l]: the maps fed to conv block l (conv_inputs[0] = {image}).
  std::vector<SignalList> conv_inputs;
  std::vector<SpectralConvCache> conv;
  std::vector<std::optional<PoolState>> pools;
  /// Maps entering the statistical layer.
  SignalList final_maps;
  StatisticalCache stats;
  /// dense_inputs[j]: input to FC layer j; pre_activations[j]: its W x + b.
  std::vector<Eigen::VectorXd> dense_inputs;
  std::vector<Eigen::VectorXd> pre_activations;
  Eigen::VectorXd logits;
};

/// Named view of one parameter array, used by the optimizer, checkpoints and
/// the gradient checker. `group` is one of "alpha", "beta", "fc".
struct ParameterView {
  std::string name;
  std::string group;
  double* data;
  Index size;
};

/// Same traversal order as ParameterView, read-only.
struct ConstParameterView {
  std::string name;
  std::string group;
  const double* data;
  Index size;
};

/// A full network on one fixed grid. Hidden FC layers use ReLU; the last FC
/// produces logits.
class Network {
 public:
  /// Parameters start at zero; see init_network for the seeded draw.
  Network(Architecture architecture, GridGraph graph);

  const Architecture& architecture() const { return architecture_; }
  const GridGraph& graph() const { return graph_; }
  const LaplacianPowers& powers() const { return powers_; }
  int num_classes() const { return architecture_.num_classes(); }
  /// Length of the flattened statistical feature vector.
  int feature_size() const;

  std::vector<SpectralConvLayer> conv;
  std::vector<DenseLayer> dense;

  ForwardCache forward(const GraphSignal& image) const;
  Eigen::VectorXd logits(const GraphSignal& image) const { return forward(image).logits; }
  int predict(const GraphSignal& image) const;

  /// Order: per conv block "sc{l}.alpha", "sc{l}.beta"; per FC "fc{j}.weights", "fc{j}.biases".
  std::vector<ParameterView> parameters();
  std::vector<ConstParameterView> parameters() const;
  Index parameter_count() const;

 private:
  Architecture architecture_;
  GridGraph graph_;
  LaplacianPowers powers_;
};

}  // namespace tigranet
