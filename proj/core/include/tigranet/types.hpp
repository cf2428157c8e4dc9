#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace tigranet {

using Index = Eigen::Index;

/// Real-valued signal on the nodes of a graph, indexed by node.
using GraphSignal = Eigen::VectorXd;

/// Sparse operators are stored by compressed columns so that restricting an
/// operator to a subset of columns is a column mask.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

using SignalList = std::vector<GraphSignal>;

}  // namespace tigranet
