#include "smcrep/spanning_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace smcrep {

std::vector<Edge> random_spanning_tree(const WeightedGraph& g, const NodeMask& region, Engine& rng) {
  const std::vector<Node> nodes = members(region);
  if (nodes.empty()) throw std::domain_error("random_spanning_tree: empty region");
  if (!g.is_connected(region)) throw std::domain_error("random_spanning_tree: region is disconnected");

  const auto n = static_cast<std::size_t>(g.node_count());
  std::vector<char> in_tree(n, 0);
  std::vector<Node> next(n, -1);
  in_tree[nodes.front()] = 1;

  std::vector<Node> region_nbrs;
  for (Node start : nodes) {
    // Random walk until the tree is hit; overwriting next[] erases loops.
    for (Node v = start; !in_tree[v]; v = next[v]) {
      region_nbrs.clear();
      for (Node w : g.neighbors(v)) {
        if (region[w]) region_nbrs.push_back(w);
      }
      next[v] = region_nbrs[uniform_index(rng, region_nbrs.size())];
    }
    for (Node v = start; !in_tree[v]; v = next[v]) in_tree[v] = 1;
  }

  std::vector<Edge> tree;
  tree.reserve(nodes.size() - 1);
  for (Node v : nodes) {
    if (next[v] >= 0) tree.push_back({std::min(v, next[v]), std::max(v, next[v])});
  }
  std::sort(tree.begin(), tree.end());
  return tree;
}

std::vector<Edge> random_spanning_tree(const WeightedGraph& g, Engine& rng) {
  return random_spanning_tree(g, full_mask(g), rng);
}

template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> reduced_laplacian(const WeightedGraph& g,
                                                                       const NodeMask& region) {
  const std::vector<Node> nodes = members(region);
  std::vector<Eigen::Index> pos(static_cast<std::size_t>(g.node_count()), -1);
  for (std::size_t i = 1; i < nodes.size(); ++i) pos[nodes[i]] = static_cast<Eigen::Index>(i - 1);
  const auto dim = static_cast<Eigen::Index>(nodes.empty() ? 0 : nodes.size() - 1);

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> lap =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(dim, dim);
  for (const Edge& e : g.edges()) {
    if (!region[e.u] || !region[e.v]) continue;
    const Eigen::Index a = pos[e.u], b = pos[e.v];
    if (a >= 0) lap(a, a) += Scalar(1);
    if (b >= 0) lap(b, b) += Scalar(1);
    if (a >= 0 && b >= 0) {
      lap(a, b) -= Scalar(1);
      lap(b, a) -= Scalar(1);
    }
  }
  return lap;
}

template Eigen::MatrixXd reduced_laplacian<double>(const WeightedGraph&, const NodeMask&);
template Eigen::Matrix<BigInt, Eigen::Dynamic, Eigen::Dynamic> reduced_laplacian<BigInt>(
    const WeightedGraph&, const NodeMask&);

BigInt bareiss_determinant(Eigen::Matrix<BigInt, Eigen::Dynamic, Eigen::Dynamic> m) {
  const Eigen::Index n = m.rows();
  if (n != m.cols()) throw std::domain_error("determinant of a non-square matrix");
  if (n == 0) return 1;
  BigInt sign = 1;
  BigInt prev = 1;
  for (Eigen::Index k = 0; k < n - 1; ++k) {
    if (m(k, k) == 0) {
      Eigen::Index swap = k + 1;
      while (swap < n && m(swap, k) == 0) ++swap;
      if (swap == n) return 0;
      m.row(k).swap(m.row(swap));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      for (Eigen::Index j = k + 1; j < n; ++j) {
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      }
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

double log_spanning_tree_count(const WeightedGraph& g, const NodeMask& region) {
  if (!g.is_connected(region)) return -std::numeric_limits<double>::infinity();
  const Eigen::MatrixXd lap = reduced_laplacian<double>(g, region);
  if (lap.rows() == 0) return 0.0;
  const Eigen::LLT<Eigen::MatrixXd> llt(lap);
  if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

TreeCount spanning_tree_count(const WeightedGraph& g, const NodeMask& region) {
  TreeCount out;
  out.log_count = log_spanning_tree_count(g, region);
  const auto size = std::count(region.begin(), region.end(), 1);
  if (size <= 64) {
    out.exact = std::isinf(out.log_count) ? BigInt(0)
                                          : bareiss_determinant(reduced_laplacian<BigInt>(g, region));
  }
  return out;
}

TreeCount spanning_tree_count(const WeightedGraph& g) { return spanning_tree_count(g, full_mask(g)); }

}  // namespace smcrep
