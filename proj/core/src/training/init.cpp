#include "tigranet/training/init.hpp"

#include <stdexcept>

#include "tigranet/rng.hpp"

namespace tigranet {

std::pair<double, double> init_window(const InitSpec& spec, int index) {
  const double width = 2.0 * (spec.hi - spec.lo) / (spec.num_windows + 1);
  const double start = spec.lo + index * width / 2.0;
  return {start, start + width};
}

Eigen::VectorXd init_sample_grid(const InitSpec& spec) {
  Eigen::VectorXd grid(spec.samples);
  const double step = (spec.hi - spec.lo) / spec.samples;
  for (int j = 0; j < spec.samples; ++j) grid[j] = spec.lo + (j + 0.5) * step;
  return grid;
}

Eigen::MatrixXd init_spectral_filters(const InitSpec& spec) {
  if (spec.num_windows < 1) throw std::invalid_argument("need at least one window");
  if (spec.degree < 0) throw std::invalid_argument("polynomial degree must be >= 0");
  if (spec.samples < spec.degree + 1) throw std::invalid_argument("too few samples for the fit");

  const Eigen::VectorXd lambda = init_sample_grid(spec);
  Eigen::MatrixXd vander(spec.samples, spec.degree + 1);
  for (int j = 0; j < spec.samples; ++j) {
    double p = 1.0;
    for (int m = 0; m <= spec.degree; ++m, p *= lambda[j]) vander(j, m) = p;
  }
  Eigen::MatrixXd gram = vander.transpose() * vander;
  gram.diagonal().array() += 1e-8;
  const Eigen::LDLT<Eigen::MatrixXd> solver(gram);

  Eigen::MatrixXd alpha(spec.num_windows, spec.degree + 1);
  for (int i = 0; i < spec.num_windows; ++i) {
    const auto [a, b] = init_window(spec, i);
    const Eigen::VectorXd target =
        ((lambda.array() >= a) && (lambda.array() <= b)).cast<double>().matrix();
    alpha.row(i) = solver.solve(vander.transpose() * target).transpose();
  }
  return alpha;
}

void init_dense_and_beta(Network& network, std::uint64_t seed) {
  Rng rng(seed);
  for (auto& layer : network.conv) {
    for (Index k = 0; k < layer.beta.size(); ++k) layer.beta[k] = rng.uniform();
  }
  for (auto& layer : network.dense) {
    for (Index c = 0; c < layer.weights.cols(); ++c) {
      for (Index r = 0; r < layer.weights.rows(); ++r) layer.weights(r, c) = rng.uniform(-1.0, 1.0);
    }
    for (Index r = 0; r < layer.biases.size(); ++r) layer.biases[r] = rng.uniform(-1.0, 1.0);
  }
}

void init_network(Network& network, std::uint64_t seed) {
  for (auto& layer : network.conv) {
    layer.alpha = init_spectral_filters({layer.num_filters(), layer.degree()});
  }
  init_dense_and_beta(network, seed);
}

}  // namespace tigranet
