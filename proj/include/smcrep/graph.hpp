#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace smcrep {

using Node = std::int32_t;

struct Edge {
  Node u;
  Node v;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Membership mask over the nodes of a graph.
using NodeMask = std::vector<char>;

/// Undirected simple graph with positive integer node populations.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  /// Throws std::domain_error on self-loops, repeated edges, out-of-range
  /// endpoints or non-positive populations. Edges are stored with u < v.
  WeightedGraph(int nodes, std::vector<Edge> edges, std::vector<std::int64_t> populations = {});

  static WeightedGraph grid(int rows, int cols);
  static WeightedGraph path(int nodes);
  static WeightedGraph cycle(int nodes);
  static WeightedGraph complete(int nodes);

  int node_count() const noexcept { return static_cast<int>(adjacency_.size()); }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<Node>& neighbors(Node v) const { return adjacency_.at(v); }
  std::int64_t population(Node v) const { return populations_.at(v); }
  const std::vector<std::int64_t>& populations() const noexcept { return populations_; }
  std::int64_t total_population() const noexcept { return total_; }

  std::int64_t population(const NodeMask& region) const;
  bool is_connected() const;
  /// Connectivity of the subgraph induced by `region` (empty regions are not).
  bool is_connected(const NodeMask& region) const;

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<Node>> adjacency_;
  std::vector<std::int64_t> populations_;
  std::int64_t total_ = 0;
};

NodeMask full_mask(const WeightedGraph& g);
NodeMask mask_of(const WeightedGraph& g, const std::vector<Node>& nodes);
std::vector<Node> members(const NodeMask& region);

/// Edge list: one "u v" pair per line, 0-based; blank lines and lines
/// starting with '#' are skipped.
std::vector<Edge> read_edge_list(std::istream& in);
/// Node weights: one "node weight" pair per line; same comment rules.
std::vector<std::int64_t> read_node_weights(std::istream& in, int nodes);

/// Loads an edge-list file and an optional node-weight file (unit weights
/// when `weights_path` is empty). Node count is 1 + the largest index. Throws std::runtime_error on I/O or
/// parse failures.
WeightedGraph load_graph(const std::string& edges_path, const std::string& weights_path = {});

/// Parses "grid:RxC", "path:N", "cycle:N", "complete:N".
WeightedGraph builtin_graph(const std::string& spec);

}  // namespace smcrep
