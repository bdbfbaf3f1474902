#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "smcrep/graph.hpp"
#include "smcrep/rational.hpp"
#include "smcrep/rng.hpp"

namespace smcrep {

/// Uniform spanning tree of the subgraph induced by `region` (Wilson's
/// loop-erased random walk). Edges come back sorted.
/// Throws std::domain_error if the region is empty or disconnected.
std::vector<Edge> random_spanning_tree(const WeightedGraph& g, const NodeMask& region, Engine& rng);
std::vector<Edge> random_spanning_tree(const WeightedGraph& g, Engine& rng);

/// Laplacian of the induced subgraph with the first member's row and
/// column removed; rows follow members(region) minus that first node.
template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> reduced_laplacian(const WeightedGraph& g,
                                                                       const NodeMask& region);

struct TreeCount {
  /// log tau; -infinity for disconnected inputs.
  double log_count = 0.0;
  /// Exact tau, present when the region has at most 64 nodes.
  std::optional<BigInt> exact;
};

/// Matrix-tree theorem: tau = det(reduced Laplacian).
TreeCount spanning_tree_count(const WeightedGraph& g, const NodeMask& region);
TreeCount spanning_tree_count(const WeightedGraph& g);

/// log tau only, via a Cholesky factorisation. -infinity if disconnected.
double log_spanning_tree_count(const WeightedGraph& g, const NodeMask& region);

/// Exact determinant by fraction-free (Bareiss) elimination.
BigInt bareiss_determinant(Eigen::Matrix<BigInt, Eigen::Dynamic, Eigen::Dynamic> m);

}  // namespace smcrep
