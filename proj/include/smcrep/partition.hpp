#pragma once

// Sequential district marking by spanning-tree cuts, the inter-generational
// weight tau^(rho-1)/|cut|, and brute-force oracles on tiny graphs.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "smcrep/graph.hpp"
#include "smcrep/rng.hpp"

namespace smcrep {

inline constexpr std::int32_t kUnassigned = -1;

/// A plan with `marked()` districts drawn, numbered in drawing order, and
/// the rest of the graph unassigned. Complete once every node is assigned.
class PartialPlan {
 public:
  PartialPlan(std::shared_ptr<const WeightedGraph> graph, int districts);
  /// Throws std::domain_error if labels are out of range or not a prefix
  /// 0..m-1 of district ids.
  PartialPlan(std::shared_ptr<const WeightedGraph> graph, int districts,
              std::vector<std::int32_t> assignment);

  const WeightedGraph& graph() const noexcept { return *graph_; }
  const std::shared_ptr<const WeightedGraph>& graph_ptr() const noexcept { return graph_; }
  int districts() const noexcept { return districts_; }
  int marked() const noexcept { return marked_; }
  /// Diagram level of this partial plan: k - m.
  int level() const noexcept { return districts_ - marked_; }
  bool complete() const noexcept { return marked_ == districts_; }
  const std::vector<std::int32_t>& assignment() const noexcept { return assignment_; }

  NodeMask unassigned() const;
  NodeMask district(int id) const;
  double target_population() const;

  /// Assigns `region` (all currently unassigned) to the next district id.
  /// When exactly one district would remain, the leftover region becomes
  /// the final district as well.
  void mark(const NodeMask& region);

  friend bool operator==(const PartialPlan& a, const PartialPlan& b) {
    return a.districts_ == b.districts_ && a.assignment_ == b.assignment_;
  }

 private:
  std::shared_ptr<const WeightedGraph> graph_;
  int districts_;
  int marked_ = 0;
  std::vector<std::int32_t> assignment_;
};

/// Complete assignment node -> district in 0..k-1.
struct Plan {
  int districts = 0;
  std::vector<std::int32_t> assignment;

  friend bool operator==(const Plan&, const Plan&) = default;
  friend auto operator<=>(const Plan&, const Plan&) = default;
};

/// Relabels districts by first appearance so equal partitions compare equal.
Plan canonical(const Plan& plan);
Plan to_plan(const PartialPlan& p);

/// Independent post-hoc check: k districts, each non-empty, connected and
/// within `pop_tol` of total/k.
bool is_valid_plan(const WeightedGraph& g, const Plan& plan, double pop_tol);

/// Population window for one district: |pop - target| <= tol * target.
bool within_tolerance(double pop, double target, double tol);

/// Marks one district cut from a uniform spanning tree of the unassigned
/// region. Each attempt draws a fresh tree and picks uniformly among the
/// (tree edge, side) pairs whose side is a balanced district and whose
/// remainder can still hold the remaining districts. nullopt signals a
/// bottleneck: no attempt found a balanced cut.
std::optional<PartialPlan> split_district(const PartialPlan& plan, double pop_tol, int attempts,
                                          Engine& rng);

/// Which edges count towards |cut| in the weight.
enum class CutCount {
  /// Edges joining any two distinct pieces, the remainder being one piece.
  all_pieces,
  /// Edges joining two distinct marked districts only.
  marked_only,
};

int cut_edge_count(const PartialPlan& plan, CutCount mode = CutCount::all_pieces);

/// log of tau^(rho-1) / |cut|, tau being the product of spanning-tree counts
/// of every marked district and of the unassigned remainder.
/// Throws std::domain_error when |cut| = 0.
double partial_plan_weight(const PartialPlan& plan, double rho,
                           CutCount mode = CutCount::all_pieces);

// ---------------------------------------------------------------------------
// Brute-force oracles (tiny graphs only)

inline constexpr int kEnumerationNodeCap = 20;
inline constexpr int kTreeEnumerationEdgeCap = 30;

/// Every connected balanced k-partition, canonical and sorted. Refuses
/// (std::length_error) above kEnumerationNodeCap nodes.
std::vector<Plan> enumerate_balanced_partitions(const WeightedGraph& g, int districts,
                                                double pop_tol);

/// Every spanning tree of the induced subgraph by edge-subset enumeration.
std::vector<std::vector<Edge>> enumerate_spanning_trees(const WeightedGraph& g,
                                                        const NodeMask& region);

/// Exact law of the district split_district marks on `plan`, given that
/// some attempt succeeds: uniform tree, then uniform balanced (edge, side).
/// Keys are the marked districts' node masks.
std::map<NodeMask, double> split_law(const PartialPlan& plan, double pop_tol);

/// Probability that sequential splitting from the empty plan yields `plan`
/// as an unlabeled partition, summing over all drawing orders.
double sequential_split_probability(const std::shared_ptr<const WeightedGraph>& g,
                                    const Plan& plan, double pop_tol);

}  // namespace smcrep
