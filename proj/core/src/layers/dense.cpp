#include "tigranet/layers/dense.hpp"

#include <stdexcept>
#include <string>

#include "tigranet/errors.hpp"

namespace tigranet {

DenseLayer::DenseLayer(int inputs, int outputs)
    : weights(Eigen::MatrixXd::Zero(outputs, inputs)), biases(Eigen::VectorXd::Zero(outputs)) {
  if (inputs < 1 || outputs < 1) throw std::invalid_argument("dense layer dimensions must be >= 1");
}

Eigen::VectorXd dense_forward(const DenseLayer& layer, const Eigen::VectorXd& x) {
  if (x.size() != layer.weights.cols()) {
    throw DimensionError("dense layer expects " + std::to_string(layer.weights.cols()) +
                         " inputs, got " + std::to_string(x.size()));
  }
  Eigen::VectorXd y = layer.biases;
  y.noalias() += layer.weights * x;
  return y;
}

Eigen::VectorXd relu(const Eigen::VectorXd& x) { return x.cwiseMax(0.0); }

}  // namespace tigranet
