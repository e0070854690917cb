#include <doctest.h>

#include "lpmatch/graph.hpp"
#include "lpmatch/matching.hpp"
#include "lpmatch/rng.hpp"
#include "oracles.hpp"

using namespace lpm;

namespace {

BipartiteMultigraph graph(std::size_t m, const std::vector<std::vector<Node>>& rows) {
  return BipartiteMultigraph(m, rows);
}

BipartiteMultigraph random_graph(std::uint64_t seed, std::size_t max_n, std::size_t max_m) {
  Xoshiro256 rng(seed);
  const std::size_t m = 1 + rng.below(max_m);
  const std::size_t n = 1 + rng.below(max_n);
  BipartiteMultigraph g(m);
  for (std::size_t x = 0; x < n; ++x) {
    std::vector<Node> row(1 + rng.below(3));
    for (auto& v : row) v = static_cast<Node>(rng.below(m));
    g.add_left_node(row);
  }
  return g;
}

}  // namespace

TEST_CASE("small decisions and witnesses") {
  const auto single = graph(1, {{0}});
  auto r = has_left_perfect_matching(single);
  REQUIRE(r.is_matched());
  CHECK(r.assignment() == std::vector<Node>{0});

  const auto pigeon = graph(1, {{0}, {0}});
  r = has_left_perfect_matching(pigeon);
  REQUIRE_FALSE(r.is_matched());
  CHECK(r.violator() == std::vector<Node>{0, 1});
  CHECK(witness_is_sound(pigeon, r));

  const auto three = graph(3, {{0, 1}, {0, 1}, {0, 1}});
  r = has_left_perfect_matching(three);
  REQUIRE_FALSE(r);
  CHECK(r.violator() == std::vector<Node>{0, 1, 2});
}

TEST_CASE("parallel edges do not count twice") {
  const auto g = graph(2, {{0, 0, 0}, {0, 0}});
  CHECK_FALSE(has_left_perfect_matching(g).is_matched());
  CHECK(has_left_perfect_matching(graph(2, {{0, 0, 1}, {0, 0}})).is_matched());
}

TEST_CASE("subset matching") {
  const auto pigeon = graph(1, {{0}, {0}});
  const auto empty = has_matching_for_subset(pigeon, {});
  REQUIRE(empty.is_matched());
  CHECK(empty.assignment() == std::vector<Node>{kUnmatched, kUnmatched});

  const std::vector<Node> all{0, 1};
  CHECK_FALSE(has_matching_for_subset(pigeon, all).is_matched());

  const std::vector<Node> one{1};
  const auto r = has_matching_for_subset(pigeon, one);
  REQUIRE(r.is_matched());
  CHECK(r.assignment() == std::vector<Node>{kUnmatched, 0});
  CHECK(witness_is_sound(pigeon, r, one));
}

TEST_CASE("unsound witnesses are rejected") {
  const auto g = graph(2, {{0}, {1}});
  CHECK_FALSE(witness_is_sound(g, MatchingResult::matched({0, 0})));
  CHECK_FALSE(witness_is_sound(g, MatchingResult::matched({1, 0})));
  CHECK_FALSE(witness_is_sound(g, MatchingResult::unmatched({0, 1})));
  CHECK(witness_is_sound(g, MatchingResult::matched({0, 1})));
}

TEST_CASE("agreement with brute force and monotonicity on random graphs") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto g = random_graph(seed, 6, 6);
    const auto r = has_left_perfect_matching(g);
    CHECK(r.is_matched() == oracle::matchable(g));
    CHECK(witness_is_sound(g, r));

    // Random subset: decision agrees with brute force on the induced graph,
    // and a matchable subset stays matchable after dropping a node.
    Xoshiro256 rng(mix_seed(seed, 1));
    std::vector<Node> subset;
    for (std::size_t x = 0; x < g.left_count(); ++x) {
      if (rng.below(2)) subset.push_back(static_cast<Node>(x));
    }
    const auto sub = has_matching_for_subset(g, subset);
    CHECK(sub.is_matched() == oracle::matchable(g.induced(subset)));
    // An empty span means "all left nodes" to the soundness check.
    if (!subset.empty()) CHECK(witness_is_sound(g, sub, subset));
    if (sub.is_matched() && !subset.empty()) {
      subset.pop_back();
      CHECK(has_matching_for_subset(g, subset).is_matched());
    }
  }
}

TEST_CASE("large instance with a known answer") {
  // Node x is adjacent to x and x + 1: always matchable when m = n + 1.
  BipartiteMultigraph g(100001);
  for (Node x = 0; x < 100000; ++x) g.add_left_node({x + 1, x});
  const auto r = has_left_perfect_matching(g);
  REQUIRE(r.is_matched());
  CHECK(witness_is_sound(g, r));
}
