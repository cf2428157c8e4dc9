#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "tigranet/layers/network.hpp"

namespace tigranet {

struct AdamConfig {
  double learning_rate = 1e-3;
  double decay1 = 0.9;
  double decay2 = 0.999;
  double epsilon = 1e-8;
};

/// Moments are stored per parameter block, in Network::parameters() order.
struct AdamState {
  AdamConfig config;
  std::vector<Eigen::VectorXd> first_moment;
  std::vector<Eigen::VectorXd> second_moment;
  std::int64_t step = 0;

  AdamState() = default;
  explicit AdamState(AdamConfig cfg) : config(cfg) {}
};

/// One bias-corrected Adam update. Moments are allocated on the first call.
/// Throws DimensionError when block counts or sizes disagree.
void adam_step(AdamState& state, const std::vector<ParameterView>& params,
               const std::vector<ParameterView>& grads);

}  // namespace tigranet
