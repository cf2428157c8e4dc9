#pragma once

#include <Eigen/Dense>

namespace tigranet {

/// Fully-connected affine layer y = W x + b.
struct DenseLayer {
  Eigen::MatrixXd weights;  ///< outputs x inputs
  Eigen::VectorXd biases;   ///< outputs

  DenseLayer() = default;
  DenseLayer(int inputs, int outputs);

  int inputs() const { return static_cast<int>(weights.cols()); }
  int outputs() const { return static_cast<int>(weights.rows()); }
};

/// Throws DimensionError when x does not have inputs() entries.
Eigen::VectorXd dense_forward(const DenseLayer& layer, const Eigen::VectorXd& x);

Eigen::VectorXd relu(const Eigen::VectorXd& x);

}  // namespace tigranet
