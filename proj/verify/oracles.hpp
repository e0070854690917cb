#pragma once

// Brute-force reference implementations. None of these call into the
// matching, structure or failprob code they are used to check.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "lpmatch/failprob.hpp"
#include "lpmatch/graph.hpp"
#include "lpmatch/structure.hpp"

namespace lpm::oracle {

/// Exhaustive injective assignment search over the raw neighbor lists.
std::optional<std::vector<Node>> find_assignment(const BipartiteMultigraph& g);
bool matchable(const BipartiteMultigraph& g);

/// Number of left-perfect matchings of the support graph via Ryser's formula.
/// For n < m the 0/1 matrix is padded with m - n rows of ones and the
/// permanent divided by (m - n)!.
std::uint64_t count_matchings_ryser(const BipartiteMultigraph& g);

/// All left-perfect matchings, by plain recursion over right-node bitmasks.
std::vector<std::vector<Node>> all_matchings(const BipartiteMultigraph& g);

struct Structure {
  std::vector<NodeClass> classes;
  /// h[u][v]: some matching leaves u and v both unmatched (u != v, both non-blocked).
  std::vector<std::vector<char>> h;
  CorePartition partition;
  /// Whether "no H-edge" was transitive on the non-blocked nodes.
  bool transitive = true;
};

/// Classes, H-graph and partition read off the full list of matchings.
/// Requires at least one matching.
Structure structure(const BipartiteMultigraph& g);

/// Probability that g_rest plus two new left nodes with uniform neighbor
/// tuples of lengths d_y and d_z has no left-perfect matching, counted over
/// all m^(d_y + d_z) tuples.
Rational fail(unsigned d_y, unsigned d_z, const BipartiteMultigraph& g_rest);

/// Success probability summed over every degree outcome and every neighbor
/// tuple of every node (tuples grouped by their support set).
Rational success_probability(const DegreeSpec& spec, std::size_t m, SamplingMode mode);

/// k-uniform threshold: solve k = xi t / (1 - e^-xi - xi e^-xi), t = 1 - e^-xi,
/// then c* = xi / (k t^(k-1)). Long double bisection.
double uniform_threshold(unsigned k);

}  // namespace lpm::oracle
