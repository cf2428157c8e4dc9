#pragma once

#include <utility>
#include <vector>

#include "tigranet/types.hpp"

namespace tigranet {

enum class Connectivity { FourNN, EightNN };

const char* to_string(Connectivity connectivity);
Connectivity parse_connectivity(const std::string& text);

/// Regular grid graph over an image lattice. Nodes are indexed row-major by
/// (row, col); all edge weights are 1 and there is no wraparound.
///
/// The normalized Laplacian follows the usual case analysis: 1 on the diagonal
/// of nodes with nonzero degree, -(d_i d_j)^(-1/2) between adjacent nodes and
/// 0 elsewhere. Immutable after construction.
class GridGraph {
 public:
  /// Throws std::invalid_argument if either dimension is < 1.
  GridGraph(int height, int width, Connectivity connectivity);

  int height() const { return height_; }
  int width() const { return width_; }
  Index num_nodes() const { return static_cast<Index>(height_) * width_; }
  Connectivity connectivity() const { return connectivity_; }

  const SparseMatrix& adjacency() const { return adjacency_; }
  const Eigen::VectorXd& degrees() const { return degrees_; }
  const SparseMatrix& laplacian() const { return laplacian_; }

  Index node(int row, int col) const { return static_cast<Index>(row) * width_ + col; }
  int row_of(Index node) const { return static_cast<int>(node / width_); }
  int col_of(Index node) const { return static_cast<int>(node % width_); }
  bool contains(int row, int col) const {
    return row >= 0 && row < height_ && col >= 0 && col < width_;
  }

  /// Neighbor offsets (drow, dcol) implied by the connectivity.
  static std::vector<std::pair<int, int>> offsets(Connectivity connectivity);

  bool operator==(const GridGraph& other) const {
    return height_ == other.height_ && width_ == other.width_ &&
           connectivity_ == other.connectivity_;
  }

 private:
  int height_;
  int width_;
  Connectivity connectivity_;
  SparseMatrix adjacency_;
  Eigen::VectorXd degrees_;
  SparseMatrix laplacian_;
};

GridGraph build_grid_graph(int height, int width, Connectivity connectivity);

/// Exact sparse powers [I, L, L^2, ..., L^M] of the normalized Laplacian.
/// powers[m] has nonzeros only between nodes at most m hops apart.
class LaplacianPowers {
 public:
  LaplacianPowers(const GridGraph& graph, int max_degree);

  int max_degree() const { return static_cast<int>(powers_.size()) - 1; }
  const SparseMatrix& operator[](int m) const { return powers_.at(static_cast<std::size_t>(m)); }
  const std::vector<SparseMatrix>& powers() const { return powers_; }

  /// Returns [y, L y, ..., L^M y] by repeated sparse products with L, which
  /// equals powers[m] * y without touching the denser high powers.
  SignalList monomials(const GraphSignal& signal) const;

 private:
  std::vector<SparseMatrix> powers_;
};

LaplacianPowers laplacian_powers(const GridGraph& graph, int max_degree);

/// A grid embedded in a larger zero-padded grid.
struct PaddedGraph {
  GridGraph graph;
  int margin;
  int inner_height;
  int inner_width;
  /// embedding[i] is the padded-grid node of original node i.
  std::vector<Index> embedding;

  GraphSignal embed(const GraphSignal& inner) const;
  GraphSignal extract(const GraphSignal& padded) const;
};

/// Grows the grid by `margin` nodes on every side. margin = 0 returns an
/// identical graph with the identity embedding.
PaddedGraph zero_pad_graph(const GridGraph& graph, int margin);

}  // namespace tigranet
