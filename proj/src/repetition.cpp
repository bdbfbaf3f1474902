#include "smcrep/repetition.hpp"

#include <algorithm>
#include <unordered_map>

namespace smcrep {
namespace {

// Counts district node-lists, resolving fingerprint collisions exactly.
class DistrictCounter {
 public:
  void add(std::vector<Node> nodes) {
    auto& bucket = buckets_[fingerprint(nodes).hash];
    for (auto& [members, count] : bucket) {
      if (members == nodes) {
        ++count;
        return;
      }
    }
    bucket.emplace_back(std::move(nodes), 1);
  }

  template <class Fn>
  void for_each_count(Fn&& fn) const {
    for (const auto& [hash, bucket] : buckets_) {
      for (const auto& entry : bucket) fn(entry.second);
    }
  }

  std::size_t distinct() const {
    std::size_t n = 0;
    for (const auto& [hash, bucket] : buckets_) n += bucket.size();
    return n;
  }

 private:
  std::unordered_map<std::uint64_t, std::vector<std::pair<std::vector<Node>, std::size_t>>> buckets_;
};

}  // namespace

DistrictFingerprint fingerprint(const std::vector<Node>& sorted_nodes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (Node v : sorted_nodes) {
    auto x = static_cast<std::uint32_t>(v);
    for (int b = 0; b < 4; ++b) {
      h ^= (x >> (8 * b)) & 0xffu;
      h *= 0x100000001b3ULL;
    }
  }
  return {h};
}

RepetitionReport repetition_report(const std::vector<Plan>& sample, const DescendancyDiagram* diagram) {
  RepetitionReport report;
  report.plans = sample.size();
  if (sample.empty()) return report;
  report.districts_per_plan = static_cast<std::size_t>(sample.front().districts);

  DistrictCounter all, first;
  for (const Plan& plan : sample) {
    std::vector<std::vector<Node>> districts(static_cast<std::size_t>(plan.districts));
    for (std::size_t v = 0; v < plan.assignment.size(); ++v) {
      districts.at(static_cast<std::size_t>(plan.assignment[v])).push_back(static_cast<Node>(v));
    }
    first.add(districts.front());
    for (auto& d : districts) {
      ++report.district_slots;
      all.add(std::move(d));
    }
  }
  report.distinct_districts = all.distinct();
  report.average_multiplicity =
      static_cast<double>(report.district_slots) / static_cast<double>(report.distinct_districts);
  all.for_each_count([&](std::size_t c) {
    report.max_multiplicity = std::max(report.max_multiplicity, c);
    ++report.multiplicity_histogram[c];
  });
  report.distinct_first_districts = first.distinct();
  report.first_district_repetition =
      static_cast<double>(report.plans) / static_cast<double>(report.distinct_first_districts);

  if (diagram) {
    const auto decorated = decorate(*diagram);
    for (int j = 1; j <= diagram->levels(); ++j) {
      report.shared_district_counts.push_back(common_district_count(decorated.decoration, j));
    }
    report.surviving_ancestors = decorated.profile.counts.back();
  }
  return report;
}

}  // namespace smcrep
