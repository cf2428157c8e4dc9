#include "tigranet/equivariance/gap.hpp"

#include <cmath>

#include "tigranet/errors.hpp"
#include "tigranet/imaging/resample.hpp"
#include "tigranet/layers/spectral_conv.hpp"

namespace tigranet {

std::vector<Index> interior_nodes(const GridGraph& graph, int margin) {
  std::vector<Index> out;
  for (int r = margin; r < graph.height() - margin; ++r) {
    for (int c = margin; c < graph.width() - margin; ++c) out.push_back(graph.node(r, c));
  }
  return out;
}

GapResult equivariance_gap(const LaplacianPowers& powers, const GridGraph& graph,
                           std::span<const double> alpha, const GraphSignal& signal,
                           const TransformSpec& spec) {
  const int h = graph.height();
  const int w = graph.width();
  if (signal.size() != graph.num_nodes()) throw DimensionError("signal does not match the graph");

  const GraphSignal moved = spec.is_graph_isometric() ? apply_graph_isometry(signal, h, w, spec)
                                                      : apply_general_isometry(signal, h, w, spec);
  const GraphSignal lhs = apply_polynomial_filter(powers, alpha, moved);
  const GraphSignal rhs =
      apply_graph_isometry(apply_polynomial_filter(powers, alpha, signal), h, w, closest_graph_isometry(spec));

  GapResult out;
  out.per_node = (lhs - rhs).cwiseAbs();
  const int margin = static_cast<int>(alpha.size()) - 1;
  for (const Index v : interior_nodes(graph, margin)) out.max_interior = std::max(out.max_interior, out.per_node[v]);
  return out;
}

double vertex_gap(const LaplacianPowers& powers, const GridGraph& graph, std::span<const double> alpha,
                  const GrayImage& image, double gamma, int row, int col) {
  if (image.height != graph.height() || image.width != graph.width()) {
    throw DimensionError("image does not match the graph");
  }
  const Index v = graph.node(row, col);
  GraphSignal delta = GraphSignal::Zero(graph.num_nodes());
  delta[v] = 1.0;
  // F is symmetric, so (F x)(v) = <F e_v, x>.
  const GraphSignal column = apply_polynomial_filter(powers, alpha, delta);

  const double c = std::cos(gamma);
  const double s = std::sin(gamma);
  double moved = 0.0;
  double original = 0.0;
  for (Index u = 0; u < column.size(); ++u) {
    if (column[u] == 0.0) continue;
    const double dx = graph.col_of(u) - col;
    const double dy = graph.row_of(u) - row;
    const double value = sample_bilinear(image, c * dx + s * dy + col, -s * dx + c * dy + row);
    moved += column[u] * value;
    original += column[u] * image.at(graph.row_of(u), graph.col_of(u));
  }
  return std::abs(moved - original);
}

}  // namespace tigranet
