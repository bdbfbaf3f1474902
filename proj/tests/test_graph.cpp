#include "doctest.h"

#include <map>
#include <sstream>

#include <Eigen/LU>
#include <boost/math/distributions/chi_squared.hpp>

#include "oracles.hpp"
#include "smcrep/graph.hpp"
#include "smcrep/spanning_tree.hpp"

using namespace smcrep;

TEST_CASE("graph construction") {
  const auto g = WeightedGraph::grid(2, 3);
  CHECK(g.node_count() == 6);
  CHECK(g.edge_count() == 7);
  CHECK(g.total_population() == 6);
  CHECK(g.is_connected());
  CHECK(WeightedGraph::complete(4).edge_count() == 6);
  CHECK(WeightedGraph::cycle(4).edge_count() == 4);
  CHECK(WeightedGraph::path(5).edge_count() == 4);

  CHECK_THROWS_AS(WeightedGraph(2, {{0, 0}}), std::domain_error);
  CHECK_THROWS_AS(WeightedGraph(2, {{0, 1}, {1, 0}}), std::domain_error);
  CHECK_THROWS_AS(WeightedGraph(2, {{0, 2}}), std::domain_error);
  CHECK_THROWS_AS(WeightedGraph(2, {{0, 1}}, {1, 0}), std::domain_error);

  const WeightedGraph split(4, {{0, 1}, {2, 3}});
  CHECK(!split.is_connected());
  CHECK(split.is_connected(mask_of(split, {2, 3})));
  CHECK(!split.is_connected(mask_of(split, {})));
  CHECK(split.population(mask_of(split, {0, 3})) == 2);
}

TEST_CASE("graph input") {
  std::istringstream edges("# square\n0 1\n1 2\n\n2 3\n3 0\n");
  const auto list = read_edge_list(edges);
  CHECK(list.size() == 4);
  std::istringstream weights("0 5\n1 1\n2 1\n3 1\n");
  const auto pops = read_node_weights(weights, 4);
  CHECK(pops == std::vector<std::int64_t>{5, 1, 1, 1});
  std::istringstream bad("0 x\n");
  CHECK_THROWS(read_edge_list(bad));
  std::istringstream short_weights("0 5\n");
  CHECK_THROWS(read_node_weights(short_weights, 4));

  CHECK(builtin_graph("grid:3x3").node_count() == 9);
  CHECK(builtin_graph("cycle:5").edge_count() == 5);
  CHECK_THROWS(builtin_graph("torus:3"));
}

TEST_CASE("spanning tree counts match brute force") {
  const std::vector<std::pair<std::string, WeightedGraph>> corpus{
      {"K3", WeightedGraph::complete(3)},   {"K4", WeightedGraph::complete(4)},
      {"C4", WeightedGraph::cycle(4)},      {"2x3", WeightedGraph::grid(2, 3)},
      {"3x3", WeightedGraph::grid(3, 3)},   {"P5", WeightedGraph::path(5)},
      {"K5", WeightedGraph::complete(5)},   {"single", WeightedGraph(1, {})}};
  for (const auto& [name, g] : corpus) {
    INFO(name);
    const auto count = spanning_tree_count(g);
    const long long brute = oracle::spanning_tree_count(g);
    REQUIRE(count.exact);
    CHECK(*count.exact == brute);
    CHECK(count.log_count == doctest::Approx(std::log(static_cast<double>(brute))));
  }
  CHECK(*spanning_tree_count(WeightedGraph::cycle(4)).exact == 4);
  CHECK(*spanning_tree_count(WeightedGraph::complete(4)).exact == 16);
  CHECK(*spanning_tree_count(WeightedGraph::grid(3, 3)).exact == 192);
  CHECK(*spanning_tree_count(WeightedGraph(1, {})).exact == 1);

  const WeightedGraph split(4, {{0, 1}, {2, 3}});
  const auto none = spanning_tree_count(split);
  CHECK(*none.exact == 0);
  CHECK(std::isinf(none.log_count));

  // Larger grid: log path agrees with exact Bareiss.
  const auto g = WeightedGraph::grid(5, 6);
  const auto big = spanning_tree_count(g);
  CHECK(big.log_count == doctest::Approx(std::log(to_double(Rational(*big.exact)))).epsilon(1e-10));
  CHECK(log_spanning_tree_count(g, full_mask(g)) == doctest::Approx(big.log_count).epsilon(1e-10));
}

TEST_CASE("Wilson trees are uniform") {
  for (const auto& g : {WeightedGraph::complete(3), WeightedGraph::cycle(4), WeightedGraph::grid(2, 3)}) {
    std::map<std::vector<Edge>, double> counts;
    Engine rng(123);
    const int draws = 100'000;
    for (int i = 0; i < draws; ++i) {
      const auto tree = random_spanning_tree(g, rng);
      REQUIRE(static_cast<int>(tree.size()) == g.node_count() - 1);
      REQUIRE(WeightedGraph(g.node_count(), tree).is_connected());
      ++counts[tree];
    }
    const long long trees = oracle::spanning_tree_count(g);
    CHECK(static_cast<long long>(counts.size()) == trees);
    double stat = 0.0;
    const double expected = static_cast<double>(draws) / trees;
    for (const auto& [tree, n] : counts) stat += (n - expected) * (n - expected) / expected;
    const double p = boost::math::cdf(
        boost::math::complement(boost::math::chi_squared(static_cast<double>(trees - 1)), stat));
    CHECK(p > 0.001);
  }

  Engine rng(1);
  const auto path = WeightedGraph::path(6);
  for (int i = 0; i < 20; ++i) CHECK(random_spanning_tree(path, rng) == path.edges());

  const WeightedGraph split(4, {{0, 1}, {2, 3}});
  CHECK_THROWS_AS(random_spanning_tree(split, rng), std::domain_error);
  CHECK(random_spanning_tree(split, mask_of(split, {2, 3}), rng) == std::vector<Edge>{{2, 3}});
}

TEST_CASE("reduced Laplacian and Bareiss") {
  const auto g = WeightedGraph::cycle(4);
  const auto lap = reduced_laplacian<double>(g, full_mask(g));
  CHECK(lap.rows() == 3);
  CHECK(lap.determinant() == doctest::Approx(4.0));
  Eigen::Matrix<BigInt, Eigen::Dynamic, Eigen::Dynamic> m(2, 2);
  m << BigInt(0), BigInt(2), BigInt(3), BigInt(1);
  CHECK(bareiss_determinant(m) == -6);
}
