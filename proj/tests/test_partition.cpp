#include "doctest.h"

#include <cmath>
#include <map>
#include <set>

#include <boost/math/distributions/chi_squared.hpp>

#include "oracles.hpp"
#include "smcrep/partition.hpp"
#include "smcrep/spanning_tree.hpp"

using namespace smcrep;

namespace {

std::shared_ptr<const WeightedGraph> share(WeightedGraph g) {
  return std::make_shared<const WeightedGraph>(std::move(g));
}

}  // namespace

TEST_CASE("partial plans") {
  const auto g = share(WeightedGraph::grid(3, 3));
  PartialPlan p(g, 3);
  CHECK(p.level() == 3);
  CHECK(p.target_population() == 3.0);
  p.mark(mask_of(*g, {0, 1, 2}));
  CHECK(p.marked() == 1);
  CHECK(p.level() == 2);
  p.mark(mask_of(*g, {3, 4, 5}));
  CHECK(p.complete());
  CHECK(to_plan(p).assignment == std::vector<std::int32_t>{0, 0, 0, 1, 1, 1, 2, 2, 2});
  CHECK(is_valid_plan(*g, to_plan(p), 0.0));
  CHECK_THROWS_AS(PartialPlan(g, 3, {0, 2, 2, 2, -1, -1, -1, -1, -1}), std::domain_error);

  Plan broken{3, {0, 1, 0, 1, 1, 1, 2, 2, 2}};
  CHECK(!is_valid_plan(*g, broken, 0.0));
  CHECK(canonical(Plan{2, {1, 1, 0, 0}}).assignment == std::vector<std::int32_t>{0, 0, 1, 1});
}

TEST_CASE("balanced partition enumeration") {
  CHECK(enumerate_balanced_partitions(WeightedGraph::grid(2, 2), 2, 0.0).size() == 2);
  CHECK(enumerate_balanced_partitions(WeightedGraph::path(4), 2, 0.0).size() == 1);
  const auto plans = enumerate_balanced_partitions(WeightedGraph::grid(3, 3), 3, 0.0);
  CHECK(plans.size() == 10);
  CHECK(oracle::partition_count(WeightedGraph::grid(3, 3), 3) == 10);
  CHECK(enumerate_balanced_partitions(WeightedGraph::grid(2, 4), 2, 0.0).size() ==
        oracle::partition_count(WeightedGraph::grid(2, 4), 2));
  CHECK(enumerate_balanced_partitions(WeightedGraph::grid(2, 3), 3, 0.0).size() ==
        oracle::partition_count(WeightedGraph::grid(2, 3), 3));
  for (const auto& plan : plans) CHECK(is_valid_plan(WeightedGraph::grid(3, 3), plan, 0.0));
  CHECK_THROWS_AS(enumerate_balanced_partitions(WeightedGraph::grid(3, 7), 3, 0.0), std::length_error);
}

TEST_CASE("tree enumeration") {
  const auto g = WeightedGraph::grid(3, 3);
  CHECK(enumerate_spanning_trees(g, full_mask(g)).size() == 192);
  CHECK(enumerate_spanning_trees(WeightedGraph::complete(4), full_mask(WeightedGraph::complete(4))).size() == 16);
}

TEST_CASE("split_district contracts") {
  Engine rng(8);
  const auto grid = share(WeightedGraph::grid(4, 4));
  for (int i = 0; i < 200; ++i) {
    const auto next = split_district(PartialPlan(grid, 4), 0.0, 1000, rng);
    REQUIRE(next);
    const auto d = next->district(0);
    REQUIRE(std::count(d.begin(), d.end(), 1) == 4);
    REQUIRE(grid->is_connected(d));
  }
  const auto path = share(WeightedGraph::path(4));
  for (int i = 0; i < 50; ++i) {
    const auto next = split_district(PartialPlan(path, 2), 0.0, 10, rng);
    REQUIRE(next);
    REQUIRE(next->complete());
    REQUIRE(canonical(to_plan(*next)).assignment == std::vector<std::int32_t>{0, 0, 1, 1});
  }
  // A star cannot be cut 2|2.
  const auto star = share(WeightedGraph(4, {{0, 1}, {0, 2}, {0, 3}}));
  CHECK(!split_district(PartialPlan(star, 2), 0.0, 50, rng));
}

TEST_CASE("split law matches an independent tree-cut oracle") {
  const auto g = share(WeightedGraph::grid(3, 3));
  const auto law = split_law(PartialPlan(g, 3), 0.0);
  const auto brute = oracle::first_split_law(*g, 3);
  REQUIRE(law.size() == brute.size());
  for (const auto& [side, p] : brute) CHECK(law.at(side) == doctest::Approx(p).epsilon(1e-12));

  std::map<NodeMask, double> counts;
  const int seeds = 100'000;
  for (int i = 0; i < seeds; ++i) {
    Engine trial = make_stream(31, {static_cast<std::uint64_t>(i)});
    ++counts[split_district(PartialPlan(g, 3), 0.0, 1000, trial)->district(0)];
  }
  double stat = 0.0;
  for (const auto& [side, p] : law) {
    const double e = seeds * p;
    stat += (counts[side] - e) * (counts[side] - e) / e;
  }
  CHECK(counts.size() == law.size());
  const double pvalue =
      boost::math::cdf(boost::math::complement(boost::math::chi_squared(static_cast<double>(law.size() - 1)), stat));
  CHECK(pvalue > 0.001);
}

TEST_CASE("sequential split probabilities form a distribution") {
  const auto g = share(WeightedGraph::grid(3, 3));
  const auto plans = enumerate_balanced_partitions(*g, 3, 0.0);
  double total = 0.0;
  for (const auto& plan : plans) {
    const double p = sequential_split_probability(g, plan, 0.0);
    CHECK(p > 0.0);
    total += p;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  // Monte Carlo over full sequential runs.
  std::map<Plan, double> counts;
  const int runs = 40'000;
  for (int i = 0; i < runs; ++i) {
    Engine rng = make_stream(4, {static_cast<std::uint64_t>(i)});
    auto p = split_district(PartialPlan(g, 3), 0.0, 1000, rng);
    p = split_district(*p, 0.0, 1000, rng);
    ++counts[canonical(to_plan(*p))];
  }
  for (const auto& plan : plans) {
    const double q = sequential_split_probability(g, plan, 0.0);
    CHECK(std::abs(counts[plan] / runs - q) <= 4 * std::sqrt(q * (1 - q) / runs));
  }
}

TEST_CASE("partial plan weights") {
  const auto grid = share(WeightedGraph::grid(4, 4));
  PartialPlan column(grid, 4);
  column.mark(mask_of(*grid, {0, 4, 8, 12}));
  CHECK(cut_edge_count(column) == 4);
  CHECK(cut_edge_count(column, CutCount::marked_only) == 0);
  CHECK(partial_plan_weight(column, 1.0) == doctest::Approx(-std::log(4.0)));
  CHECK(partial_plan_weight(column, 1.0) == partial_plan_weight(column, 1.0));

  // tau(column) = 1, tau(3x4 remainder) by brute force.
  const double rest = std::log(static_cast<double>(oracle::spanning_tree_count(WeightedGraph::grid(4, 3))));
  CHECK(partial_plan_weight(column, 2.0) == doctest::Approx(rest - std::log(4.0)));
  CHECK(partial_plan_weight(column, 0.5) == doctest::Approx(-0.5 * rest - std::log(4.0)));

  const auto square = share(WeightedGraph::grid(2, 2));
  PartialPlan dominoes(square, 2, {0, 0, 1, 1});
  CHECK(cut_edge_count(dominoes) == 2);
  CHECK(partial_plan_weight(dominoes, 2.0) == doctest::Approx(std::log(0.5)));

  CHECK_THROWS_AS(partial_plan_weight(PartialPlan(grid, 4), 1.0), std::domain_error);
}
