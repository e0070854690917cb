#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lpmatch/graph.hpp"

namespace lpm {

/// Right-node classes relative to the set of all left-perfect matchings of a
/// fixed graph: matched in every one, in none, or in some but not all.
enum class NodeClass { Blocked, Free, HalfFree };

std::string_view to_string(NodeClass c) noexcept;

/// Blocked count plus the ascending sizes of the classes of non-blocked
/// right nodes. b + sum(sizes) == m.
struct BIVector {
  std::size_t b = 0;
  std::vector<std::size_t> sizes;

  std::size_t r() const noexcept { return sizes.size(); }
  std::size_t total() const noexcept;
  friend bool operator==(const BIVector&, const BIVector&) = default;
};

struct CorePartition {
  std::vector<Node> blocked;
  /// Each class ascending; classes ordered by (size, smallest member).
  std::vector<std::vector<Node>> classes;
  BIVector bi;

  friend bool operator==(const CorePartition&, const CorePartition&) = default;
};

/// Search-space bound for exhaustive enumeration (product of neighbor-set
/// sizes); larger instances raise InstanceTooLarge.
inline constexpr std::uint64_t kEnumerationGuard = 100'000'000;

/// Product of the left support sizes, saturating at UINT64_MAX.
std::uint64_t enumeration_space(const BipartiteMultigraph& g);

/// Calls `visit` once per left-perfect matching of the support graph, in
/// lexicographic order of (left node -> right node) assignments. Returning
/// false from `visit` stops the enumeration.
void for_each_left_perfect_matching(const BipartiteMultigraph& g,
                                    const std::function<bool(std::span<const Node>)>& visit);

std::vector<std::vector<Node>> enumerate_left_perfect_matchings(const BipartiteMultigraph& g);

/// One maximum matching plus alternating reachability from its exposed right
/// nodes. Throws NoMatchingExists when g has no left-perfect matching.
std::vector<NodeClass> classify_right_nodes(const BipartiteMultigraph& g);

enum class HEdgeMethod { Auto, Enumeration, Repair };

/// Pairs (v1 < v2) of `v_set` that some left-perfect matching leaves
/// simultaneously unmatched, sorted. Auto enumerates below the guard and
/// otherwise repairs one maximum matching with v1, v2 removed.
std::vector<std::pair<Node, Node>> h_graph_edges(const BipartiteMultigraph& g,
                                                 std::span<const Node> v_set,
                                                 HEdgeMethod method = HEdgeMethod::Auto);

/// Blocked set plus the classes of the "no H-edge" relation on the
/// non-blocked nodes (polynomial path only).
CorePartition bi_partition(const BipartiteMultigraph& g);

/// `b=<b> classes=<i1,...,ir>`, then `B=<members>` and one `I<j>=<members>`
/// line per class, members comma-separated.
std::string to_text(const CorePartition& partition);

}  // namespace lpm
