#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lpmatch/graph.hpp"

namespace lpm {

inline constexpr Node kUnmatched = ~Node{0};

/// Mate arrays of a maximum matching; kUnmatched marks exposed nodes.
struct MaximumMatching {
  std::vector<Node> left_mate;
  std::vector<Node> right_mate;
  std::size_t size = 0;

  bool is_left_perfect() const noexcept { return size == left_mate.size(); }
};

/// Hopcroft-Karp on the support graph (parallel edges are harmless: a right
/// node is used at most once regardless of multiplicity). Deterministic:
/// left nodes are scanned in ascending order and neighbors in stored order.
MaximumMatching maximum_matching(const BipartiteMultigraph& g);

/// Either a left-perfect assignment (left node -> right node) or a Hall
/// violator: a set of left nodes with fewer distinct neighbors than members.
class MatchingResult {
 public:
  static MatchingResult matched(std::vector<Node> assignment) {
    return MatchingResult(true, std::move(assignment), {});
  }
  static MatchingResult unmatched(std::vector<Node> violator) {
    return MatchingResult(false, {}, std::move(violator));
  }

  bool is_matched() const noexcept { return matched_; }
  explicit operator bool() const noexcept { return matched_; }

  /// Indexed by left node of the queried graph; nodes outside a queried
  /// subset hold kUnmatched.
  const std::vector<Node>& assignment() const noexcept { return assignment_; }
  /// Ascending left node indices.
  const std::vector<Node>& violator() const noexcept { return violator_; }

 private:
  MatchingResult(bool matched, std::vector<Node> assignment, std::vector<Node> violator)
      : matched_(matched), assignment_(std::move(assignment)), violator_(std::move(violator)) {}

  bool matched_;
  std::vector<Node> assignment_;
  std::vector<Node> violator_;
};

MatchingResult has_left_perfect_matching(const BipartiteMultigraph& g);

/// Same question for the induced subgraph on `subset` (duplicates ignored).
/// Indices in the result refer to the original graph.
MatchingResult has_matching_for_subset(const BipartiteMultigraph& g, std::span<const Node> subset);

/// Linear-time soundness check of a result against g: an assignment must be
/// injective and follow edges; a violator must have |N(V)| < |V|. For a
/// subset query pass the same subset; an empty span means all left nodes.
bool witness_is_sound(const BipartiteMultigraph& g, const MatchingResult& result,
                      std::span<const Node> subset = {});

/// Left nodes reachable by alternating paths from the smallest unmatched
/// left node of a non-perfect maximum matching. Always a Hall violator.
std::vector<Node> hall_violator(const BipartiteMultigraph& g, const MaximumMatching& mm);

}  // namespace lpm
