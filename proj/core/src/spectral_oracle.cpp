#include "tigranet/spectral_oracle.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

#include "tigranet/errors.hpp"

namespace tigranet {

SpectralBasis eigendecompose(const GridGraph& graph, Index max_nodes) {
  if (graph.num_nodes() > max_nodes) {
    throw OracleSizeError("graph has " + std::to_string(graph.num_nodes()) +
                          " nodes, dense oracle limit is " + std::to_string(max_nodes));
  }
  const Eigen::MatrixXd dense = Eigen::MatrixXd(graph.laplacian());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
  if (solver.info() != Eigen::Success) throw NumericError("eigendecomposition did not converge");
  // SelfAdjointEigenSolver already sorts eigenvalues in increasing order.
  return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace {
void check_length(const SpectralBasis& basis, Index length) {
  if (length != basis.size()) {
    throw DimensionError("signal length " + std::to_string(length) + " does not match basis size " +
                         std::to_string(basis.size()));
  }
}
}  // namespace

Eigen::VectorXd gft(const SpectralBasis& basis, const GraphSignal& signal) {
  check_length(basis, signal.size());
  return basis.eigenvectors.transpose() * signal;
}

GraphSignal igft(const SpectralBasis& basis, const Eigen::VectorXd& spectrum) {
  check_length(basis, spectrum.size());
  return basis.eigenvectors * spectrum;
}

GraphSignal spectral_filter(const SpectralBasis& basis, const GraphSignal& signal,
                            const SpectralKernel& kernel) {
  Eigen::VectorXd spectrum = gft(basis, signal);
  for (Index i = 0; i < spectrum.size(); ++i) spectrum[i] *= kernel(basis.eigenvalues[i]);
  return igft(basis, spectrum);
}

GraphSignal generalized_translation(const SpectralBasis& basis, const GraphSignal& signal,
                                    Index center) {
  if (center < 0 || center >= basis.size()) {
    throw std::out_of_range("translation center " + std::to_string(center) + " is not a node");
  }
  const Eigen::VectorXd spectrum = gft(basis, signal);
  const Eigen::VectorXd weights =
      spectrum.cwiseProduct(basis.eigenvectors.row(center).transpose());
  return std::sqrt(static_cast<double>(basis.size())) * (basis.eigenvectors * weights);
}

double polynomial_response(std::span<const double> alpha, double lambda) {
  double acc = 0.0;
  for (auto it = alpha.rbegin(); it != alpha.rend(); ++it) acc = acc * lambda + *it;
  return acc;
}

std::vector<std::pair<double, double>> sample_filter_response(std::span<const double> alpha,
                                                              int samples) {
  if (samples < 2) throw std::invalid_argument("need at least 2 spectral samples");
  std::vector<std::pair<double, double>> curve;
  curve.reserve(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    const double lambda = 2.0 * s / (samples - 1);
    curve.emplace_back(lambda, polynomial_response(alpha, lambda));
  }
  return curve;
}

void write_filter_response_csv(std::ostream& out, std::span<const double> alpha, int samples) {
  out << "lambda,response\n";
  for (const auto& [lambda, value] : sample_filter_response(alpha, samples)) {
    out << fmt::format("{:.17g},{:.17g}\n", lambda, value);
  }
}

}  // namespace tigranet
