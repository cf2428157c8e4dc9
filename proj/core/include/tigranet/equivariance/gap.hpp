#pragma once

#include <span>

#include "tigranet/equivariance/transform.hpp"
#include "tigranet/grid_graph.hpp"

namespace tigranet {

struct GapResult {
  /// |F(g y) - gbar(F y)| at every node.
  GraphSignal per_node;
  /// Maximum over nodes at least `degree` rows/columns away from the border.
  double max_interior = 0.0;
};

/// Equivariance gap of the filter sum_m alpha[m] L^m on the grid of `graph`.
/// g is applied by bilinear resampling unless it is graph-isometric, in
/// which case both sides use the exact node permutation.
GapResult equivariance_gap(const LaplacianPowers& powers, const GridGraph& graph,
                           std::span<const double> alpha, const GraphSignal& signal,
                           const TransformSpec& spec);

/// Gap at a single vertex v for a rotation by gamma about v itself:
/// |F(g y)(v) - F(y)(v)|, using only the filter's column at v.
double vertex_gap(const LaplacianPowers& powers, const GridGraph& graph, std::span<const double> alpha,
                  const GrayImage& image, double gamma, int row, int col);

/// Nodes with row and column at least `margin` away from every border.
std::vector<Index> interior_nodes(const GridGraph& graph, int margin);

}  // namespace tigranet
