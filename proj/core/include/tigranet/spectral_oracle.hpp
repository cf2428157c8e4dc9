#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tigranet/grid_graph.hpp"

namespace tigranet {

/// Dense eigendecomposition of the normalized Laplacian: ascending
/// eigenvalues and orthonormal eigenvectors (columns). Real graphs make the
/// conjugate transpose a plain transpose. Slow O(N^3) reference used by tests
/// and filter plots; never on the training path.
struct SpectralBasis {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;

  Index size() const { return eigenvalues.size(); }
};

inline constexpr Index kDefaultOracleLimit = 4096;

/// Throws OracleSizeError when the graph has more than `max_nodes` nodes.
SpectralBasis eigendecompose(const GridGraph& graph, Index max_nodes = kDefaultOracleLimit);

/// Graph Fourier transform: spectrum[i] = <chi_i, y>.
Eigen::VectorXd gft(const SpectralBasis& basis, const GraphSignal& signal);

/// Inverse transform: y = sum_i spectrum[i] chi_i.
GraphSignal igft(const SpectralBasis& basis, const Eigen::VectorXd& spectrum);

using SpectralKernel = std::function<double(double)>;

/// chi diag(kernel(lambda)) chi^T y.
GraphSignal spectral_filter(const SpectralBasis& basis, const GraphSignal& signal,
                            const SpectralKernel& kernel);

/// T_v y = sqrt(N) sum_i yhat(lambda_i) chi_i(v) chi_i.
GraphSignal generalized_translation(const SpectralBasis& basis, const GraphSignal& signal,
                                    Index center);

/// Evaluates sum_m alpha[m] lambda^m.
double polynomial_response(std::span<const double> alpha, double lambda);

/// `samples` evenly spaced points on [0, 2] (endpoints included) paired with
/// the polynomial response at each.
std::vector<std::pair<double, double>> sample_filter_response(std::span<const double> alpha,
                                                              int samples = 256);

/// Writes "lambda,response" rows (with header) for plotting a spectral curve.
void write_filter_response_csv(std::ostream& out, std::span<const double> alpha, int samples = 256);

}  // namespace tigranet
