#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "smcrep/diagram.hpp"
#include "smcrep/partition.hpp"

namespace smcrep {

/// Hash of a district's sorted node list. Equal hashes are confirmed by
/// comparing the node lists before two districts are treated as equal.
struct DistrictFingerprint {
  std::uint64_t hash = 0;
  friend bool operator==(const DistrictFingerprint&, const DistrictFingerprint&) = default;
};

DistrictFingerprint fingerprint(const std::vector<Node>& sorted_nodes);

struct RepetitionReport {
  std::size_t plans = 0;
  std::size_t districts_per_plan = 0;
  /// plans * districts_per_plan.
  std::size_t district_slots = 0;
  std::size_t distinct_districts = 0;
  /// district_slots / distinct_districts.
  double average_multiplicity = 0.0;
  std::size_t max_multiplicity = 0;
  /// Repetition of the first-drawn district: plans / distinct first districts.
  double first_district_repetition = 0.0;
  std::size_t distinct_first_districts = 0;
  /// multiplicity -> number of distinct districts with that multiplicity.
  std::map<std::size_t, std::size_t> multiplicity_histogram;
  /// G(D, j) for j = 1..k-1 when a diagram is supplied.
  std::vector<int> shared_district_counts;
  std::optional<int> surviving_ancestors;
};

/// Districts are read in label order; label 0 is taken as the first drawn.
RepetitionReport repetition_report(const std::vector<Plan>& sample,
                                   const DescendancyDiagram* diagram = nullptr);

}  // namespace smcrep
