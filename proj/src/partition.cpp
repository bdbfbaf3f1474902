#include "smcrep/partition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "smcrep/spanning_tree.hpp"

namespace smcrep {
namespace {

constexpr double kPopEps = 1e-9;

}  // namespace

bool within_tolerance(double pop, double target, double tol) {
  return std::abs(pop - target) <= tol * target + kPopEps;
}

// ---------------------------------------------------------------------------
// PartialPlan

PartialPlan::PartialPlan(std::shared_ptr<const WeightedGraph> graph, int districts)
    : PartialPlan(graph, districts,
                  std::vector<std::int32_t>(graph ? static_cast<std::size_t>(graph->node_count()) : 0,
                                            kUnassigned)) {}

PartialPlan::PartialPlan(std::shared_ptr<const WeightedGraph> graph, int districts,
                         std::vector<std::int32_t> assignment)
    : graph_(std::move(graph)), districts_(districts), assignment_(std::move(assignment)) {
  if (!graph_) throw std::domain_error("partial plan needs a graph");
  if (districts < 1) throw std::domain_error("partial plan needs k >= 1");
  if (static_cast<int>(assignment_.size()) != graph_->node_count())
    throw std::domain_error("assignment size does not match the graph");
  std::vector<char> used(static_cast<std::size_t>(districts), 0);
  for (auto a : assignment_) {
    if (a < kUnassigned || a >= districts) throw std::domain_error("district label out of range");
    if (a >= 0) used[a] = 1;
  }
  marked_ = static_cast<int>(std::find(used.begin(), used.end(), 0) - used.begin());
  if (std::find(used.begin() + marked_, used.end(), 1) != used.end())
    throw std::domain_error("district labels must be 0..m-1");
}

NodeMask PartialPlan::unassigned() const {
  NodeMask m(assignment_.size());
  for (std::size_t v = 0; v < m.size(); ++v) m[v] = assignment_[v] == kUnassigned;
  return m;
}

NodeMask PartialPlan::district(int id) const {
  NodeMask m(assignment_.size());
  for (std::size_t v = 0; v < m.size(); ++v) m[v] = assignment_[v] == id;
  return m;
}

double PartialPlan::target_population() const {
  return static_cast<double>(graph_->total_population()) / districts_;
}

void PartialPlan::mark(const NodeMask& region) {
  if (complete()) throw std::domain_error("plan is already complete");
  for (std::size_t v = 0; v < region.size(); ++v) {
    if (!region[v]) continue;
    if (assignment_[v] != kUnassigned) throw std::domain_error("region overlaps a marked district");
    assignment_[v] = marked_;
  }
  ++marked_;
  if (marked_ == districts_ - 1) {
    for (auto& a : assignment_) {
      if (a == kUnassigned) a = marked_;
    }
    ++marked_;
  }
}

Plan canonical(const Plan& plan) {
  std::vector<std::int32_t> relabel(static_cast<std::size_t>(plan.districts), -1);
  Plan out{plan.districts, plan.assignment};
  std::int32_t next = 0;
  for (auto& a : out.assignment) {
    if (relabel.at(a) < 0) relabel[a] = next++;
    a = relabel[a];
  }
  return out;
}

Plan to_plan(const PartialPlan& p) {
  if (!p.complete()) throw std::domain_error("partial plan is not complete");
  return {p.districts(), p.assignment()};
}

bool is_valid_plan(const WeightedGraph& g, const Plan& plan, double pop_tol) {
  if (static_cast<int>(plan.assignment.size()) != g.node_count() || plan.districts < 1) return false;
  const double target = static_cast<double>(g.total_population()) / plan.districts;
  for (int d = 0; d < plan.districts; ++d) {
    NodeMask region(plan.assignment.size());
    for (std::size_t v = 0; v < region.size(); ++v) region[v] = plan.assignment[v] == d;
    if (!g.is_connected(region)) return false;
    if (!within_tolerance(static_cast<double>(g.population(region)), target, pop_tol)) return false;
  }
  return std::all_of(plan.assignment.begin(), plan.assignment.end(),
                     [&](auto a) { return a >= 0 && a < plan.districts; });
}

// ---------------------------------------------------------------------------
// Splitting

std::optional<PartialPlan> split_district(const PartialPlan& plan, double pop_tol, int attempts,
                                          Engine& rng) {
  const int remaining = plan.districts() - plan.marked();
  if (remaining < 2) throw std::domain_error("split_district: fewer than two districts remain");
  if (pop_tol < 0.0) throw std::domain_error("split_district: negative population tolerance");

  const WeightedGraph& g = plan.graph();
  const NodeMask region = plan.unassigned();
  const std::vector<Node> nodes = members(region);
  const double target = plan.target_population();
  const double region_pop = static_cast<double>(g.population(region));
  const int left_after = remaining - 1;
  auto side_ok = [&](double side) {
    const double rest = region_pop - side;
    return within_tolerance(side, target, pop_tol) &&
           rest >= left_after * target * (1.0 - pop_tol) - kPopEps &&
           rest <= left_after * target * (1.0 + pop_tol) + kPopEps;
  };

  const auto n = static_cast<std::size_t>(g.node_count());
  std::vector<std::vector<Node>> tree_adj(n);
  std::vector<Node> parent(n), order;
  std::vector<double> subtree(n);
  // (node, take_subtree): cut the edge above `node` and keep its subtree
  // or the complement.
  std::vector<std::pair<Node, bool>> candidates;

  for (int attempt = 0; attempt < attempts; ++attempt) {
    const auto tree = random_spanning_tree(g, region, rng);
    for (Node v : nodes) tree_adj[v].clear();
    for (const Edge& e : tree) {
      tree_adj[e.u].push_back(e.v);
      tree_adj[e.v].push_back(e.u);
    }
    order.clear();
    order.push_back(nodes.front());
    parent[nodes.front()] = -1;
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (Node w : tree_adj[order[i]]) {
        if (w != parent[order[i]]) {
          parent[w] = order[i];
          order.push_back(w);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      subtree[*it] = static_cast<double>(g.population(*it));
      for (Node w : tree_adj[*it]) {
        if (w != parent[*it]) subtree[*it] += subtree[w];
      }
    }

    candidates.clear();
    for (std::size_t i = 1; i < order.size(); ++i) {
      const Node v = order[i];
      if (side_ok(subtree[v])) candidates.emplace_back(v, true);
      if (side_ok(region_pop - subtree[v])) candidates.emplace_back(v, false);
    }
    if (candidates.empty()) continue;

    const auto [cut, keep_subtree] = candidates[uniform_index(rng, candidates.size())];
    NodeMask below(n, 0);
    std::vector<Node> stack{cut};
    below[cut] = 1;
    while (!stack.empty()) {
      const Node v = stack.back();
      stack.pop_back();
      for (Node w : tree_adj[v]) {
        if (w != parent[v] && !below[w]) {
          below[w] = 1;
          stack.push_back(w);
        }
      }
    }
    NodeMask district(n, 0);
    for (Node v : nodes) district[v] = keep_subtree ? below[v] : !below[v];

    PartialPlan next = plan;
    next.mark(district);
    return next;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Weights

int cut_edge_count(const PartialPlan& plan, CutCount mode) {
  const auto& a = plan.assignment();
  int cut = 0;
  for (const Edge& e : plan.graph().edges()) {
    if (a[e.u] == a[e.v]) continue;
    if (mode == CutCount::marked_only && (a[e.u] == kUnassigned || a[e.v] == kUnassigned)) continue;
    ++cut;
  }
  return cut;
}

double partial_plan_weight(const PartialPlan& plan, double rho, CutCount mode) {
  const int cut = cut_edge_count(plan, mode);
  if (cut == 0) throw std::domain_error("partial_plan_weight: plan has no cut edges");
  double log_tau = 0.0;
  if (rho != 1.0) {
    for (int d = 0; d < plan.marked(); ++d) log_tau += log_spanning_tree_count(plan.graph(), plan.district(d));
    const NodeMask rest = plan.unassigned();
    if (std::find(rest.begin(), rest.end(), 1) != rest.end())
      log_tau += log_spanning_tree_count(plan.graph(), rest);
  }
  return (rho - 1.0) * log_tau - std::log(static_cast<double>(cut));
}

}  // namespace smcrep
