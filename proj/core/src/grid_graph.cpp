#include "tigranet/grid_graph.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tigranet/errors.hpp"

namespace tigranet {

const char* to_string(Connectivity connectivity) {
  return connectivity == Connectivity::FourNN ? "4nn" : "8nn";
}

Connectivity parse_connectivity(const std::string& text) {
  if (text == "4nn" || text == "4" || text == "FourNN") return Connectivity::FourNN;
  if (text == "8nn" || text == "8" || text == "EightNN") return Connectivity::EightNN;
  throw std::invalid_argument("unknown connectivity '" + text + "' (expected 4nn or 8nn)");
}

std::vector<std::pair<int, int>> GridGraph::offsets(Connectivity connectivity) {
  if (connectivity == Connectivity::FourNN) return {{-1, 0}, {0, -1}, {0, 1}, {1, 0}};
  return {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1}};
}

GridGraph::GridGraph(int height, int width, Connectivity connectivity)
    : height_(height), width_(width), connectivity_(connectivity) {
  if (height < 1 || width < 1) {
    throw std::invalid_argument("grid dimensions must be >= 1, got " + std::to_string(height) +
                                "x" + std::to_string(width));
  }
  const Index n = num_nodes();
  const auto nbrs = offsets(connectivity);

  std::vector<Eigen::Triplet<double>> edges;
  edges.reserve(static_cast<std::size_t>(n) * nbrs.size());
  degrees_ = Eigen::VectorXd::Zero(n);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const Index u = node(r, c);
      for (const auto& [dr, dc] : nbrs) {
        if (!contains(r + dr, c + dc)) continue;
        edges.emplace_back(node(r + dr, c + dc), u, 1.0);
        degrees_[u] += 1.0;
      }
    }
  }
  adjacency_.resize(n, n);
  adjacency_.setFromTriplets(edges.begin(), edges.end());

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(edges.size() + static_cast<std::size_t>(n));
  for (Index u = 0; u < n; ++u) {
    if (degrees_[u] != 0.0) entries.emplace_back(u, u, 1.0);
  }
  for (const auto& e : edges) {
    const double w = e.value() / std::sqrt(degrees_[e.row()] * degrees_[e.col()]);
    entries.emplace_back(e.row(), e.col(), -w);
  }
  laplacian_.resize(n, n);
  laplacian_.setFromTriplets(entries.begin(), entries.end());
  laplacian_.makeCompressed();
}

GridGraph build_grid_graph(int height, int width, Connectivity connectivity) {
  return GridGraph(height, width, connectivity);
}

LaplacianPowers::LaplacianPowers(const GridGraph& graph, int max_degree) {
  if (max_degree < 0) throw std::invalid_argument("polynomial degree must be >= 0");
  const Index n = graph.num_nodes();
  SparseMatrix identity(n, n);
  identity.setIdentity();
  powers_.reserve(static_cast<std::size_t>(max_degree) + 1);
  powers_.push_back(identity);
  for (int m = 1; m <= max_degree; ++m) {
    SparseMatrix next = (powers_.back() * graph.laplacian()).pruned();
    next.makeCompressed();
    powers_.push_back(std::move(next));
  }
}

SignalList LaplacianPowers::monomials(const GraphSignal& signal) const {
  if (signal.size() != powers_.front().rows()) {
    throw DimensionError("signal length does not match graph size");
  }
  SignalList out;
  out.reserve(powers_.size());
  out.push_back(signal);
  for (std::size_t m = 1; m < powers_.size(); ++m) out.push_back(powers_[1] * out.back());
  return out;
}

LaplacianPowers laplacian_powers(const GridGraph& graph, int max_degree) {
  return LaplacianPowers(graph, max_degree);
}

GraphSignal PaddedGraph::embed(const GraphSignal& inner) const {
  if (inner.size() != static_cast<Index>(embedding.size())) {
    throw DimensionError("signal does not match the unpadded grid");
  }
  GraphSignal out = GraphSignal::Zero(graph.num_nodes());
  for (std::size_t i = 0; i < embedding.size(); ++i) out[embedding[i]] = inner[static_cast<Index>(i)];
  return out;
}

GraphSignal PaddedGraph::extract(const GraphSignal& padded) const {
  if (padded.size() != graph.num_nodes()) throw DimensionError("signal does not match padded grid");
  GraphSignal out(static_cast<Index>(embedding.size()));
  for (std::size_t i = 0; i < embedding.size(); ++i) out[static_cast<Index>(i)] = padded[embedding[i]];
  return out;
}

PaddedGraph zero_pad_graph(const GridGraph& graph, int margin) {
  if (margin < 0) throw std::invalid_argument("padding margin must be >= 0");
  PaddedGraph padded{GridGraph(graph.height() + 2 * margin, graph.width() + 2 * margin,
                               graph.connectivity()),
                     margin, graph.height(), graph.width(), {}};
  padded.embedding.reserve(static_cast<std::size_t>(graph.num_nodes()));
  for (int r = 0; r < graph.height(); ++r) {
    for (int c = 0; c < graph.width(); ++c) {
      padded.embedding.push_back(padded.graph.node(r + margin, c + margin));
    }
  }
  return padded;
}

}  // namespace tigranet
