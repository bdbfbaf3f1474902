#pragma once

// Small hand-built diagrams with known statistics.

#include <initializer_list>
#include <utility>
#include <vector>

#include "smcrep/diagram.hpp"

namespace fixture {

/// Builds parents from per-level {child, parent} pairs; unlisted nodes point at 0.
inline smcrep::DescendancyDiagram diagram(
    int width, int districts, const std::vector<std::vector<std::pair<int, int>>>& levels) {
  smcrep::CountArray parents = smcrep::CountArray::Zero(width, districts - 2);
  for (std::size_t level = 0; level < levels.size(); ++level) {
    for (auto [child, parent] : levels[level]) parents(child, static_cast<int>(level)) = parent;
  }
  return smcrep::DescendancyDiagram(width, districts, std::move(parents));
}

/// S = 4, k = 4: one district ends up in three of the four final plans.
inline smcrep::DescendancyDiagram four_wide() {
  return diagram(4, 4, {{{0, 0}, {1, 0}, {2, 2}, {3, 3}}, {{0, 0}, {2, 0}, {3, 3}}});
}

/// S = 10, k = 6 with two surviving ancestors.
inline smcrep::DescendancyDiagram ten_wide() {
  return diagram(10, 6,
                 {{{0, 0}, {1, 0}, {2, 1}, {3, 1}, {4, 2}, {5, 2}, {6, 3}, {7, 3}, {8, 4}, {9, 4}},
                  {{0, 0}, {1, 0}, {2, 2}, {3, 2}, {4, 4}},
                  {{0, 0}, {2, 0}, {4, 4}},
                  {{0, 0}, {4, 4}}});
}

/// S = 12, k = 11, decorated: level maxima 1,2,4,8,8,9,10,11,11,11.
inline smcrep::DescendancyDiagram twelve_wide() {
  std::vector<std::pair<int, int>> l1{{0, 0}, {1, 0}, {2, 2}, {3, 2}, {4, 4}, {5, 4}};
  for (int j = 6; j < 12; ++j) l1.emplace_back(j, j);
  std::vector<std::pair<int, int>> l2{{0, 0}, {2, 0}, {4, 4}, {6, 4}};
  for (int j = 7; j < 12; ++j) l2.emplace_back(j, j);
  std::vector<std::pair<int, int>> l3{{0, 0}, {4, 0}, {7, 0}};
  for (int j = 8; j < 12; ++j) l3.emplace_back(j, j);
  return diagram(12, 11,
                 {l1, l2, l3,
                  {{0, 0}, {8, 8}, {9, 9}, {10, 10}, {11, 11}},
                  {{0, 0}, {8, 0}, {9, 9}, {10, 10}, {11, 11}},
                  {{0, 0}, {9, 0}, {10, 10}, {11, 11}},
                  {{0, 0}, {10, 0}, {11, 11}},
                  {{0, 0}, {11, 11}},
                  {{0, 0}, {11, 11}}});
}

}  // namespace fixture
