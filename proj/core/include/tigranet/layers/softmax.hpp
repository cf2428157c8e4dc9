#pragma once

#include <Eigen/Dense>

namespace tigranet {

struct SoftmaxNll {
  Eigen::VectorXd probabilities;
  double loss = 0.0;
};

/// Softmax with max-subtraction and the negative log-likelihood of `label`.
/// Throws std::out_of_range when label is not a valid class index.
SoftmaxNll softmax_nll(const Eigen::VectorXd& logits, int label);

Eigen::VectorXd softmax(const Eigen::VectorXd& logits);

}  // namespace tigranet
