#include "tigranet/layers/softmax.hpp"

#include <cmath>
#include <stdexcept>

namespace tigranet {

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  if (logits.size() == 0) throw std::invalid_argument("softmax of an empty vector");
  const Eigen::ArrayXd shifted = logits.array() - logits.maxCoeff();
  const Eigen::ArrayXd e = shifted.exp();
  return (e / e.sum()).matrix();
}

SoftmaxNll softmax_nll(const Eigen::VectorXd& logits, int label) {
  if (label < 0 || label >= logits.size()) throw std::out_of_range("label outside the class range");
  const double top = logits.maxCoeff();
  const Eigen::ArrayXd shifted = logits.array() - top;
  const double log_norm = std::log(shifted.exp().sum());
  SoftmaxNll out;
  out.probabilities = (shifted - log_norm).exp().matrix();
  out.loss = log_norm - shifted[label];
  return out;
}

}  // namespace tigranet
