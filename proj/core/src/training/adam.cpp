#include "tigranet/training/adam.hpp"

#include <cmath>

#include "tigranet/errors.hpp"

namespace tigranet {

void adam_step(AdamState& state, const std::vector<ParameterView>& params,
               const std::vector<ParameterView>& grads) {
  if (params.size() != grads.size()) throw DimensionError("adam: parameter/gradient block count mismatch");
  if (state.first_moment.empty()) {
    for (const auto& p : params) {
      state.first_moment.push_back(Eigen::VectorXd::Zero(p.size));
      state.second_moment.push_back(Eigen::VectorXd::Zero(p.size));
    }
  }
  if (state.first_moment.size() != params.size()) throw DimensionError("adam: state does not match parameters");
  for (std::size_t b = 0; b < params.size(); ++b) {
    if (params[b].size != grads[b].size || state.first_moment[b].size() != params[b].size) {
      throw DimensionError("adam: block '" + params[b].name + "' size mismatch");
    }
  }

  const auto& c = state.config;
  ++state.step;
  const double correction1 = 1.0 - std::pow(c.decay1, static_cast<double>(state.step));
  const double correction2 = 1.0 - std::pow(c.decay2, static_cast<double>(state.step));
  for (std::size_t b = 0; b < params.size(); ++b) {
    Eigen::Map<Eigen::ArrayXd> theta(params[b].data, params[b].size);
    const Eigen::Map<const Eigen::ArrayXd> g(grads[b].data, grads[b].size);
    auto m = state.first_moment[b].array();
    auto v = state.second_moment[b].array();
    m = c.decay1 * m + (1.0 - c.decay1) * g;
    v = c.decay2 * v + (1.0 - c.decay2) * g.square();
    theta -= c.learning_rate * (m / correction1) / ((v / correction2).sqrt() + c.epsilon);
  }
}

}  // namespace tigranet
