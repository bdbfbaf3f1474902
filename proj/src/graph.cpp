#include "smcrep/graph.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace smcrep {

WeightedGraph::WeightedGraph(int nodes, std::vector<Edge> edges,
                             std::vector<std::int64_t> populations)
    : edges_(std::move(edges)), adjacency_(static_cast<std::size_t>(nodes)) {
  if (nodes < 1) throw std::domain_error("graph needs at least one node");
  if (populations.empty()) populations.assign(static_cast<std::size_t>(nodes), 1);
  if (static_cast<int>(populations.size()) != nodes)
    throw std::domain_error("population count does not match node count");
  for (auto p : populations) {
    if (p <= 0) throw std::domain_error("node populations must be positive");
  }
  populations_ = std::move(populations);
  total_ = std::accumulate(populations_.begin(), populations_.end(), std::int64_t{0});

  for (auto& e : edges_) {
    if (e.u < 0 || e.v < 0 || e.u >= nodes || e.v >= nodes)
      throw std::domain_error("edge endpoint out of range");
    if (e.u == e.v) throw std::domain_error("self-loops are not allowed");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
    throw std::domain_error("repeated edge");
  for (const auto& e : edges_) {
    adjacency_[e.u].push_back(e.v);
    adjacency_[e.v].push_back(e.u);
  }
  for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

WeightedGraph WeightedGraph::grid(int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::domain_error("grid needs positive dimensions");
  std::vector<Edge> edges;
  auto id = [cols](int r, int c) { return static_cast<Node>(r * cols + c); };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1)});
      if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c)});
    }
  }
  return {rows * cols, std::move(edges)};
}

WeightedGraph WeightedGraph::path(int nodes) { return grid(1, nodes); }

WeightedGraph WeightedGraph::cycle(int nodes) {
  if (nodes < 3) throw std::domain_error("cycle needs at least 3 nodes");
  std::vector<Edge> edges;
  for (int i = 0; i < nodes; ++i) edges.push_back({i, (i + 1) % nodes});
  return {nodes, std::move(edges)};
}

WeightedGraph WeightedGraph::complete(int nodes) {
  std::vector<Edge> edges;
  for (int i = 0; i < nodes; ++i) {
    for (int j = i + 1; j < nodes; ++j) edges.push_back({i, j});
  }
  return {nodes, std::move(edges)};
}

std::int64_t WeightedGraph::population(const NodeMask& region) const {
  std::int64_t total = 0;
  for (std::size_t v = 0; v < region.size(); ++v) {
    if (region[v]) total += populations_[v];
  }
  return total;
}

bool WeightedGraph::is_connected() const { return is_connected(full_mask(*this)); }

bool WeightedGraph::is_connected(const NodeMask& region) const {
  const auto first = std::find(region.begin(), region.end(), 1);
  if (first == region.end()) return false;
  std::vector<char> seen(region.size(), 0);
  std::vector<Node> stack{static_cast<Node>(first - region.begin())};
  seen[stack.back()] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const Node v = stack.back();
    stack.pop_back();
    for (Node w : adjacency_[v]) {
      if (region[w] && !seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == static_cast<std::size_t>(std::count(region.begin(), region.end(), 1));
}

NodeMask full_mask(const WeightedGraph& g) { return NodeMask(static_cast<std::size_t>(g.node_count()), 1); }

NodeMask mask_of(const WeightedGraph& g, const std::vector<Node>& nodes) {
  NodeMask m(static_cast<std::size_t>(g.node_count()), 0);
  for (Node v : nodes) m.at(v) = 1;
  return m;
}

std::vector<Node> members(const NodeMask& region) {
  std::vector<Node> out;
  for (std::size_t v = 0; v < region.size(); ++v) {
    if (region[v]) out.push_back(static_cast<Node>(v));
  }
  return out;
}

namespace {

bool skip_line(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

}  // namespace

std::vector<Edge> read_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (skip_line(line)) continue;
    std::istringstream fields(line);
    long long u = 0, v = 0;
    std::string extra;
    if (!(fields >> u >> v) || (fields >> extra) || u < 0 || v < 0)
      throw std::runtime_error("edge list line " + std::to_string(lineno) + ": expected \"u v\"");
    edges.push_back({static_cast<Node>(u), static_cast<Node>(v)});
  }
  return edges;
}

std::vector<std::int64_t> read_node_weights(std::istream& in, int nodes) {
  std::vector<std::int64_t> weights(static_cast<std::size_t>(nodes), 0);
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (skip_line(line)) continue;
    std::istringstream fields(line);
    long long v = 0, w = 0;
    std::string extra;
    if (!(fields >> v >> w) || (fields >> extra) || v < 0 || v >= nodes)
      throw std::runtime_error("node weight line " + std::to_string(lineno) +
                               ": expected \"node weight\"");
    weights[static_cast<std::size_t>(v)] = w;
  }
  if (std::find(weights.begin(), weights.end(), 0) != weights.end())
    throw std::runtime_error("node weight file leaves some node without a positive weight");
  return weights;
}

WeightedGraph load_graph(const std::string& edges_path, const std::string& weights_path) {
  std::ifstream edges_in(edges_path);
  if (!edges_in) throw std::runtime_error("cannot open edge list " + edges_path);
  auto edges = read_edge_list(edges_in);
  Node top = 0;
  for (const auto& e : edges) top = std::max({top, e.u, e.v});
  const int nodes = edges.empty() ? 1 : top + 1;
  std::vector<std::int64_t> weights;
  if (!weights_path.empty()) {
    std::ifstream weights_in(weights_path);
    if (!weights_in) throw std::runtime_error("cannot open node weights " + weights_path);
    weights = read_node_weights(weights_in, nodes);
  }
  try {
    return {nodes, std::move(edges), std::move(weights)};
  } catch (const std::domain_error& e) {
    throw std::runtime_error(edges_path + ": " + e.what());
  }
}

WeightedGraph builtin_graph(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw std::runtime_error("unknown graph spec '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  const std::string dims = spec.substr(colon + 1);
  try {
    if (kind == "grid") {
      const auto x = dims.find('x');
      if (x == std::string::npos) throw std::runtime_error("grid spec needs RxC");
      return WeightedGraph::grid(std::stoi(dims.substr(0, x)), std::stoi(dims.substr(x + 1)));
    }
    const int n = std::stoi(dims);
    if (kind == "path") return WeightedGraph::path(n);
    if (kind == "cycle") return WeightedGraph::cycle(n);
    if (kind == "complete") return WeightedGraph::complete(n);
  } catch (const std::logic_error&) {
    throw std::runtime_error("malformed graph spec '" + spec + "'");
  }
  throw std::runtime_error("unknown graph kind '" + kind + "'");
}

}  // namespace smcrep
