#pragma once

// Descendancy diagrams: sampling under a parent-selection schedule and the
// repetition statistics read off their descendant counts.
//
// Levels run 1..k-1 with level 1 at the bottom (complete plans). Level i
// nodes (i <= k-2) each point at a parent in level i+1.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "smcrep/analytic.hpp"
#include "smcrep/rng.hpp"

namespace smcrep {

using CountArray = Eigen::Array<std::int32_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Parent-selection law for every level of a diagram.
class WeightSchedule {
 public:
  enum class Mode { uniform, per_level, spike };

  static WeightSchedule uniform();
  /// Node 0 of every level is `ratio` times likelier than each other node.
  static WeightSchedule spike(double ratio);
  /// levels[0] is the law over level 2 (parents of the bottom level),
  /// levels[1] over level 3, and so on.
  static WeightSchedule per_level(std::vector<ProbabilityVector> levels);

  Mode mode() const noexcept { return mode_; }
  double ratio() const noexcept { return ratio_; }
  /// "uniform", "spike:<ratio>" or "per-level".
  std::string name() const;

  /// Throws std::domain_error unless the schedule can drive a width-S
  /// diagram with levels 2..top_level.
  void check(int width, int top_level) const;

  /// Probability vector over the nodes of `level` (>= 2).
  ProbabilityVector law(int level, int width) const;

  /// Draws a parent index in `level` (>= 2).
  std::uint32_t draw(Engine& rng, int level, int width) const;

 private:
  Mode mode_ = Mode::uniform;
  double ratio_ = 1.0;
  std::vector<ProbabilityVector> levels_;
  std::vector<std::vector<double>> cumulative_;
};

class DescendancyDiagram {
 public:
  /// parents(j, i-1) is the parent (in level i+1) of node j in level i.
  /// Throws std::domain_error on shape or range violations.
  DescendancyDiagram(int width, int districts, CountArray parents);

  /// Node j's parent is j at every level.
  static DescendancyDiagram identity(int width, int districts);
  /// Every node's parent is node 0.
  static DescendancyDiagram chain(int width, int districts);

  int width() const noexcept { return width_; }
  int districts() const noexcept { return districts_; }
  int levels() const noexcept { return districts_ - 1; }
  const CountArray& parents() const noexcept { return parents_; }
  std::int32_t parent(int level, int node) const { return parents_(node, level - 1); }

  friend bool operator==(const DescendancyDiagram&, const DescendancyDiagram&);

 private:
  int width_;
  int districts_;
  CountArray parents_;
};

/// X_1..X_{k-1} and per-level membership.
struct ActiveProfile {
  std::vector<int> counts;
  std::vector<std::vector<bool>> active;

  int at(int level) const { return counts.at(static_cast<std::size_t>(level - 1)); }
};

/// d(i, j) = number of bottom-level descendants of node j in level i,
/// stored as descendants(j, i-1).
struct DescendantDecoration {
  CountArray descendants;

  int width() const noexcept { return static_cast<int>(descendants.rows()); }
  int levels() const noexcept { return static_cast<int>(descendants.cols()); }
  std::int32_t at(int level, int node) const { return descendants(node, level - 1); }
  /// Largest descendant count in `level`.
  std::int32_t level_max(int level) const { return descendants.col(level - 1).maxCoeff(); }
};

struct Decorated {
  ActiveProfile profile;
  DescendantDecoration decoration;
};

enum class Threshold {
  /// d >= phi * S; reproduces the published mega-ancestor tables.
  inclusive,
  /// d > phi * S.
  strict,
};

DescendancyDiagram sample_diagram(int width, int districts, const WeightSchedule& weights,
                                  std::uint64_t seed);

/// Same law as sample_diagram, drawing from a caller-owned stream.
DescendancyDiagram sample_diagram(int width, int districts, const WeightSchedule& weights,
                                  Engine& rng);

Decorated decorate(const DescendancyDiagram& diagram);

/// A(D): active nodes in the top level.
int surviving_ancestors(const DescendancyDiagram& diagram);

/// F(D, phi): lowest level holding a node with at least (or, strict, more
/// than) phi * S descendants; nullopt when no level qualifies.
std::optional<int> mega_ancestor_level(const DescendantDecoration& decoration, double share,
                                       Threshold threshold = Threshold::inclusive);

/// G(D, j): largest number of final plans sharing the first j districts,
/// i.e. the largest descendant count in level k - j. Needs 1 <= j <= k - 1.
int common_district_count(const DescendantDecoration& decoration, int shared);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Monte Carlo mean of A(D) with its standard error. Trial t draws from the
/// stream (seed, trial, t), so results do not depend on `threads`.
Estimate estimate_expected_ancestors(int width, int districts, const WeightSchedule& weights,
                                     std::size_t trials, std::uint64_t seed,
                                     unsigned threads = 0);

/// Per-level means of X_i over tall diagrams: element i-1 estimates
/// A(S, i+1) for i = 1..k-1, all from the same trials.
std::vector<Estimate> estimate_active_profile(int width, int districts,
                                              const WeightSchedule& weights,
                                              std::size_t trials, std::uint64_t seed,
                                              unsigned threads = 0);

struct SquareDiagramRow {
  int width;
  Estimate ancestors;
};

/// Monte Carlo A(S, S) for each S; S <= 2 is exact (k = 2 has one level).
std::vector<SquareDiagramRow> square_diagram_experiment(const std::vector<int>& widths,
                                                        std::size_t trials, std::uint64_t seed,
                                                        unsigned threads = 0);

/// Largest descendant count per level for a diagram grown upward until a
/// single node is ancestor to all S bottom nodes, or until `max_levels`.
/// Only active nodes draw parents; inactive ones cannot change any count.
struct CoalescenceTrace {
  std::vector<std::int32_t> level_max;  // element i-1 is level i
  bool coalesced = false;

  std::optional<int> mega_ancestor_level(double share, int width,
                                         Threshold threshold = Threshold::inclusive) const;
};

CoalescenceTrace grow_until_coalescence(int width, const WeightSchedule& weights, Engine& rng,
                                        std::optional<int> max_levels = std::nullopt);

struct FTableCell {
  int width = 0;
  double share = 0.0;
  bool vacuous = false;       // phi * S <= 1
  std::size_t trials = 0;
  std::size_t found = 0;      // trials in which some level qualified
  double mean_level = 0.0;    // over trials where found
  double stderr_level = 0.0;

  double occurrence_rate() const { return trials ? static_cast<double>(found) / trials : 0.0; }
};

/// Mean F(D, phi) on coalescence-grown diagrams for every (S, phi) pair.
/// Each S uses trial streams (seed, S, trial, t) shared across phi.
std::vector<FTableCell> f_table(const std::vector<int>& widths, const std::vector<double>& shares,
                                const WeightSchedule& weights, std::size_t trials,
                                std::uint64_t seed, std::optional<int> max_levels = std::nullopt,
                                Threshold threshold = Threshold::inclusive, unsigned threads = 0);

}  // namespace smcrep
