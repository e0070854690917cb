#include <doctest.h>

#include <algorithm>

#include "lpmatch/error.hpp"
#include "lpmatch/structure.hpp"
#include "oracles.hpp"

using namespace lpm;

namespace {

BipartiteMultigraph graph(std::size_t m, const std::vector<std::vector<Node>>& rows) {
  return BipartiteMultigraph(m, rows);
}

using NC = NodeClass;

}  // namespace

TEST_CASE("enumeration") {
  CHECK(enumerate_left_perfect_matchings(graph(2, {{0, 1}, {0, 1}})).size() == 2);
  CHECK(enumerate_left_perfect_matchings(graph(1, {{0}, {0}})).empty());

  const auto g = graph(4, {{0, 1, 3}, {1, 2}, {0, 2, 3}});
  const auto all = enumerate_left_perfect_matchings(g);
  CHECK(all.size() == oracle::count_matchings_ryser(g));
  CHECK(std::is_sorted(all.begin(), all.end()));

  std::size_t seen = 0;
  for_each_left_perfect_matching(g, [&](std::span<const Node>) { return ++seen < 2; });
  CHECK(seen == 2);
}

TEST_CASE("enumeration guard") {
  // Nine left nodes on the complete graph with 11 right nodes: 11^9 tuples.
  std::vector<std::vector<Node>> rows(9, std::vector<Node>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  const auto big = graph(11, rows);
  CHECK(enumeration_space(big) > kEnumerationGuard);
  CHECK_THROWS_AS(enumerate_left_perfect_matchings(big), Error);
  CHECK(h_graph_edges(big, std::vector<Node>{0, 1}, HEdgeMethod::Auto).size() == 1);
}

TEST_CASE("classification examples") {
  CHECK(classify_right_nodes(graph(2, {{0, 1}})) == std::vector<NC>{NC::HalfFree, NC::HalfFree});
  CHECK(classify_right_nodes(graph(3, {{0}, {1}})) ==
        std::vector<NC>{NC::Blocked, NC::Blocked, NC::Free});
  CHECK_THROWS_AS(classify_right_nodes(graph(1, {{0}, {0}})), Error);
  try {
    classify_right_nodes(graph(1, {{0}, {0}}));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NoMatchingExists);
  }
}

TEST_CASE("H-edges") {
  const auto two = graph(2, {{0, 1}});
  const std::vector<Node> both{0, 1};
  CHECK(h_graph_edges(two, both).empty());
  CHECK(h_graph_edges(two, both, HEdgeMethod::Repair).empty());

  // Right node 3 is free: it forms an H-edge with every non-blocked node.
  const auto g = graph(4, {{0, 1}, {1, 2}});
  const std::vector<Node> open{0, 1, 2, 3};
  const auto edges = h_graph_edges(g, open);
  for (Node u : {0u, 1u, 2u}) {
    CHECK(std::find(edges.begin(), edges.end(), std::pair<Node, Node>{u, 3}) != edges.end());
  }
  CHECK(h_graph_edges(g, open, HEdgeMethod::Repair) == edges);

  const auto forced = graph(3, {{0}, {1}});
  CHECK_THROWS_AS(h_graph_edges(forced, std::vector<Node>{0, 2}), Error);
}

TEST_CASE("bi_partition examples and text form") {
  const auto forced = bi_partition(graph(3, {{0}, {1}}));
  CHECK(forced.bi == BIVector{2, {1}});
  CHECK(to_text(forced) == "b=2 classes=1\nB=0,1\nI1=2\n");

  const auto two = bi_partition(graph(2, {{0, 1}}));
  CHECK(two.bi == BIVector{0, {2}});
  CHECK(two.classes == std::vector<std::vector<Node>>{{0, 1}});

  // No left nodes: every right node is free and a singleton class.
  const auto empty = bi_partition(BipartiteMultigraph(3));
  CHECK(empty.bi == BIVector{0, {1, 1, 1}});

  // Free nodes are singleton classes.
  const auto mixed = bi_partition(graph(4, {{0, 1}}));
  CHECK(mixed.bi == BIVector{0, {1, 1, 2}});
  CHECK(mixed.classes.back() == std::vector<Node>{0, 1});
}
