#include "tigranet/layers/network.hpp"

#include <fmt/format.h>

#include "tigranet/errors.hpp"

namespace tigranet {

Network::Network(Architecture architecture, GridGraph graph)
    : architecture_(std::move(architecture)),
      graph_(std::move(graph)),
      powers_(graph_, architecture_.max_degree()) {
  int inputs = 1;
  for (const auto& block : architecture_.conv) {
    conv.emplace_back(inputs, block.filters, block.degree);
    inputs = block.filters;
  }
  int width = feature_size();
  for (const int h : architecture_.dense) {
    dense.emplace_back(width, h);
    width = h;
  }
}

int Network::feature_size() const {
  return architecture_.conv.back().filters * 2 * (architecture_.max_order + 1);
}

ForwardCache Network::forward(const GraphSignal& image) const {
  if (image.size() != graph_.num_nodes()) {
    throw DimensionError(fmt::format("image has {} values but the network grid has {} nodes",
                                     image.size(), graph_.num_nodes()));
  }
  ForwardCache cache;
  SignalList maps{image};
  ActiveSet active = ActiveSet::all(graph_.num_nodes());
  for (std::size_t l = 0; l < conv.size(); ++l) {
    auto out = spectral_conv_forward(conv[l], powers_, maps, active);
    cache.conv_inputs.push_back(std::move(maps));
    cache.conv.push_back(std::move(out.cache));
    if (const auto budget = architecture_.conv[l].pool_budget) {
      auto pooled = dynamic_pool(out.maps, active, *budget);
      active = pooled.state.union_nodes;
      maps = std::move(pooled.maps);
      cache.pools.emplace_back(std::move(pooled.state));
    } else {
      maps = std::move(out.maps);
      cache.pools.emplace_back(std::nullopt);
    }
  }
  cache.stats = statistical_forward(maps, graph_, architecture_.max_order);
  cache.final_maps = std::move(maps);

  Eigen::VectorXd x = cache.stats.stats.flattened();
  for (std::size_t j = 0; j < dense.size(); ++j) {
    Eigen::VectorXd pre = dense_forward(dense[j], x);
    cache.dense_inputs.push_back(std::move(x));
    x = j + 1 < dense.size() ? relu(pre) : pre;
    cache.pre_activations.push_back(std::move(pre));
  }
  cache.logits = std::move(x);
  return cache;
}

int Network::predict(const GraphSignal& image) const {
  const Eigen::VectorXd z = logits(image);
  Index best = 0;
  z.maxCoeff(&best);
  return static_cast<int>(best);
}

std::vector<ParameterView> Network::parameters() {
  std::vector<ParameterView> views;
  for (std::size_t l = 0; l < conv.size(); ++l) {
    views.push_back({fmt::format("sc{}.alpha", l), "alpha", conv[l].alpha.data(), conv[l].alpha.size()});
    views.push_back({fmt::format("sc{}.beta", l), "beta", conv[l].beta.data(), conv[l].beta.size()});
  }
  for (std::size_t j = 0; j < dense.size(); ++j) {
    views.push_back({fmt::format("fc{}.weights", j), "fc", dense[j].weights.data(), dense[j].weights.size()});
    views.push_back({fmt::format("fc{}.biases", j), "fc", dense[j].biases.data(), dense[j].biases.size()});
  }
  return views;
}

std::vector<ConstParameterView> Network::parameters() const {
  std::vector<ConstParameterView> out;
  for (const auto& v : const_cast<Network*>(this)->parameters()) {
    out.push_back({v.name, v.group, v.data, v.size});
  }
  return out;
}

Index Network::parameter_count() const {
  Index total = 0;
  for (const auto& v : parameters()) total += v.size;
  return total;
}

}  // namespace tigranet
