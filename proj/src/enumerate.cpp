#include "smcrep/partition.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace smcrep {
namespace {

using Bits = std::uint32_t;

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

double bits_population(const WeightedGraph& g, Bits set) {
  double pop = 0.0;
  for (int v = 0; v < g.node_count(); ++v) {
    if (set >> v & 1u) pop += static_cast<double>(g.population(v));
  }
  return pop;
}

bool bits_connected(const WeightedGraph& g, Bits set) {
  if (set == 0) return false;
  Bits seen = set & (~set + 1);
  for (Bits frontier = seen; frontier;) {
    Bits grow = 0;
    for (int v = 0; v < g.node_count(); ++v) {
      if (!(frontier >> v & 1u)) continue;
      for (Node w : g.neighbors(v)) grow |= Bits{1} << w;
    }
    frontier = grow & set & ~seen;
    seen |= frontier;
  }
  return seen == set;
}

// All connected subsets of `allowed` that contain `root` and weigh at most
// `max_pop`.
std::vector<Bits> connected_subsets(const WeightedGraph& g, int root, Bits allowed, double max_pop) {
  std::vector<Bits> out;
  std::unordered_set<Bits> seen{Bits{1} << root};
  std::vector<Bits> stack{Bits{1} << root};
  while (!stack.empty()) {
    const Bits set = stack.back();
    stack.pop_back();
    out.push_back(set);
    Bits frontier = 0;
    for (int v = 0; v < g.node_count(); ++v) {
      if (!(set >> v & 1u)) continue;
      for (Node w : g.neighbors(v)) frontier |= Bits{1} << w;
    }
    frontier &= allowed & ~set;
    for (int w = 0; w < g.node_count(); ++w) {
      if (!(frontier >> w & 1u)) continue;
      const Bits bigger = set | Bits{1} << w;
      if (seen.count(bigger) || bits_population(g, bigger) > max_pop) continue;
      seen.insert(bigger);
      stack.push_back(bigger);
    }
  }
  return out;
}

void partitions_from(const WeightedGraph& g, Bits unassigned, int left, double target, double tol,
                     std::vector<Bits>& pieces, std::vector<Plan>& out) {
  if (left == 1) {
    if (!bits_connected(g, unassigned) ||
        !within_tolerance(bits_population(g, unassigned), target, tol))
      return;
    Plan plan{static_cast<int>(pieces.size()) + 1,
              std::vector<std::int32_t>(static_cast<std::size_t>(g.node_count()))};
    pieces.push_back(unassigned);
    for (std::size_t d = 0; d < pieces.size(); ++d) {
      for (int v = 0; v < g.node_count(); ++v) {
        if (pieces[d] >> v & 1u) plan.assignment[v] = static_cast<std::int32_t>(d);
      }
    }
    pieces.pop_back();
    out.push_back(canonical(plan));
    return;
  }
  const int root = std::countr_zero(unassigned);
  for (Bits piece : connected_subsets(g, root, unassigned, target * (1.0 + tol) + 1e-9)) {
    if (!within_tolerance(bits_population(g, piece), target, tol)) continue;
    pieces.push_back(piece);
    partitions_from(g, unassigned & ~piece, left - 1, target, tol, pieces, out);
    pieces.pop_back();
  }
}

}  // namespace

std::vector<Plan> enumerate_balanced_partitions(const WeightedGraph& g, int districts,
                                                double pop_tol) {
  if (g.node_count() > kEnumerationNodeCap)
    throw std::length_error("enumerate_balanced_partitions: graph exceeds " +
                            std::to_string(kEnumerationNodeCap) + " nodes");
  if (districts < 1) throw std::domain_error("enumerate_balanced_partitions: need k >= 1");
  const Bits all = g.node_count() == 32 ? ~Bits{0} : (Bits{1} << g.node_count()) - 1;
  const double target = static_cast<double>(g.total_population()) / districts;
  std::vector<Plan> out;
  std::vector<Bits> pieces;
  partitions_from(g, all, districts, target, pop_tol, pieces, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::vector<Edge>> enumerate_spanning_trees(const WeightedGraph& g,
                                                        const NodeMask& region) {
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (region[e.u] && region[e.v]) edges.push_back(e);
  }
  if (static_cast<int>(edges.size()) > kTreeEnumerationEdgeCap)
    throw std::length_error("enumerate_spanning_trees: too many edges");
  const auto size = static_cast<std::size_t>(std::count(region.begin(), region.end(), 1));
  std::vector<std::vector<Edge>> trees;
  if (size == 0) return trees;
  if (size == 1) return {{}};

  // Choose edges in index order, pruning on cycles and on running out.
  std::vector<Edge> chosen;
  const auto recurse = [&](auto&& self, std::size_t next, UnionFind uf) -> void {
    if (chosen.size() == size - 1) {
      trees.push_back(chosen);
      return;
    }
    for (std::size_t i = next; i < edges.size(); ++i) {
      if (edges.size() - i < size - 1 - chosen.size()) return;
      UnionFind branch = uf;
      if (!branch.unite(edges[i].u, edges[i].v)) continue;
      chosen.push_back(edges[i]);
      self(self, i + 1, std::move(branch));
      chosen.pop_back();
    }
  };
  recurse(recurse, 0, UnionFind(static_cast<std::size_t>(g.node_count())));
  return trees;
}

std::map<NodeMask, double> split_law(const PartialPlan& plan, double pop_tol) {
  const WeightedGraph& g = plan.graph();
  const int remaining = plan.districts() - plan.marked();
  if (remaining < 2) throw std::domain_error("split_law: fewer than two districts remain");
  const NodeMask region = plan.unassigned();
  const double target = plan.target_population();
  const double region_pop = static_cast<double>(g.population(region));
  const int left_after = remaining - 1;

  std::map<NodeMask, double> weight;
  std::size_t productive_trees = 0;
  for (const auto& tree : enumerate_spanning_trees(g, region)) {
    // Removing edge i leaves two components; label them with union-find.
    std::vector<NodeMask> sides;
    for (std::size_t cut = 0; cut < tree.size(); ++cut) {
      UnionFind uf(static_cast<std::size_t>(g.node_count()));
      for (std::size_t i = 0; i < tree.size(); ++i) {
        if (i != cut) uf.unite(tree[i].u, tree[i].v);
      }
      const int root = uf.find(tree[cut].u);
      NodeMask a(region.size(), 0), b(region.size(), 0);
      for (std::size_t v = 0; v < region.size(); ++v) {
        if (!region[v]) continue;
        (uf.find(static_cast<int>(v)) == root ? a : b)[v] = 1;
      }
      for (const NodeMask* side : {&a, &b}) {
        const double pop = static_cast<double>(g.population(*side));
        const double rest = region_pop - pop;
        if (within_tolerance(pop, target, pop_tol) &&
            rest >= left_after * target * (1.0 - pop_tol) - 1e-9 &&
            rest <= left_after * target * (1.0 + pop_tol) + 1e-9)
          sides.push_back(*side);
      }
    }
    if (sides.empty()) continue;
    ++productive_trees;
    for (const auto& s : sides) weight[s] += 1.0 / static_cast<double>(sides.size());
  }
  for (auto& [mask, w] : weight) w /= static_cast<double>(productive_trees);
  return weight;
}

double sequential_split_probability(const std::shared_ptr<const WeightedGraph>& g,
                                    const Plan& plan, double pop_tol) {
  const int k = plan.districts;
  std::vector<NodeMask> districts;
  for (int d = 0; d < k; ++d) {
    NodeMask m(plan.assignment.size());
    for (std::size_t v = 0; v < m.size(); ++v) m[v] = plan.assignment[v] == d;
    districts.push_back(std::move(m));
  }
  if (k == 1) return 1.0;

  const auto recurse = [&](auto&& self, const PartialPlan& partial, std::vector<int> left) -> double {
    if (left.size() <= 1) return 1.0;
    const auto law = split_law(partial, pop_tol);
    double total = 0.0;
    for (std::size_t i = 0; i < left.size(); ++i) {
      const auto it = law.find(districts[left[i]]);
      if (it == law.end()) continue;
      PartialPlan next = partial;
      next.mark(districts[left[i]]);
      std::vector<int> rest = left;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      total += it->second * self(self, next, std::move(rest));
    }
    return total;
  };
  std::vector<int> all(static_cast<std::size_t>(k));
  std::iota(all.begin(), all.end(), 0);
  return recurse(recurse, PartialPlan(g, k), std::move(all));
}

}  // namespace smcrep
