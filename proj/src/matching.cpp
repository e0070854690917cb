#include "lpmatch/matching.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace lpm {

namespace {

constexpr std::uint32_t kInfinity = std::numeric_limits<std::uint32_t>::max();

class HopcroftKarp {
 public:
  explicit HopcroftKarp(const BipartiteMultigraph& g)
      : g_(g),
        n_(g.left_count()),
        left_mate_(n_, kUnmatched),
        right_mate_(g.right_count(), kUnmatched),
        dist_(n_),
        cursor_(n_) {}

  MaximumMatching run() {
    std::size_t size = greedy();
    while (size < n_ && layer()) {
      for (std::size_t x = 0; x < n_; ++x) cursor_[x] = 0;
      for (std::size_t x = 0; x < n_; ++x) {
        if (left_mate_[x] == kUnmatched && augment(static_cast<Node>(x))) ++size;
      }
    }
    return {std::move(left_mate_), std::move(right_mate_), size};
  }

 private:
  std::size_t greedy() {
    std::size_t size = 0;
    for (std::size_t x = 0; x < n_; ++x) {
      for (Node v : g_.neighbors(x)) {
        if (right_mate_[v] == kUnmatched) {
          right_mate_[v] = static_cast<Node>(x);
          left_mate_[x] = v;
          ++size;
          break;
        }
      }
    }
    return size;
  }

  // BFS layering from every exposed left node. Returns whether some exposed
  // right node is reachable.
  bool layer() {
    std::queue<Node> queue;
    for (std::size_t x = 0; x < n_; ++x) {
      if (left_mate_[x] == kUnmatched) {
        dist_[x] = 0;
        queue.push(static_cast<Node>(x));
      } else {
        dist_[x] = kInfinity;
      }
    }
    bool found = false;
    while (!queue.empty()) {
      const Node x = queue.front();
      queue.pop();
      for (Node v : g_.neighbors(x)) {
        const Node w = right_mate_[v];
        if (w == kUnmatched) {
          found = true;
        } else if (dist_[w] == kInfinity) {
          dist_[w] = dist_[x] + 1;
          queue.push(w);
        }
      }
    }
    return found;
  }

  // Iterative layered DFS; a dead end sets the node's layer to infinity.
  bool augment(Node root) {
    stack_.clear();
    stack_.push_back(root);
    while (!stack_.empty()) {
      const Node x = stack_.back();
      const auto row = g_.neighbors(x);
      if (cursor_[x] == row.size()) {
        dist_[x] = kInfinity;
        stack_.pop_back();
        continue;
      }
      const Node v = row[cursor_[x]];
      const Node w = right_mate_[v];
      if (w == kUnmatched) {
        for (Node y : stack_) {
          const Node target = g_.neighbors(y)[cursor_[y]];
          left_mate_[y] = target;
          right_mate_[target] = y;
        }
        return true;
      }
      if (dist_[w] == dist_[x] + 1) {
        stack_.push_back(w);
      } else {
        ++cursor_[x];
      }
    }
    return false;
  }

  const BipartiteMultigraph& g_;
  std::size_t n_;
  std::vector<Node> left_mate_;
  std::vector<Node> right_mate_;
  std::vector<std::uint32_t> dist_;
  std::vector<std::size_t> cursor_;
  std::vector<Node> stack_;
};

}  // namespace

MaximumMatching maximum_matching(const BipartiteMultigraph& g) { return HopcroftKarp(g).run(); }

std::vector<Node> hall_violator(const BipartiteMultigraph& g, const MaximumMatching& mm) {
  const auto root = std::find(mm.left_mate.begin(), mm.left_mate.end(), kUnmatched);
  if (root == mm.left_mate.end()) return {};

  std::vector<char> seen_left(g.left_count(), 0);
  std::vector<char> seen_right(g.right_count(), 0);
  std::vector<Node> frontier{static_cast<Node>(root - mm.left_mate.begin())};
  seen_left[frontier.front()] = 1;
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    for (Node v : g.neighbors(frontier[head])) {
      if (seen_right[v]) continue;
      seen_right[v] = 1;
      // Maximality: every right node reached from an exposed left node is matched.
      const Node w = mm.right_mate[v];
      if (w != kUnmatched && !seen_left[w]) {
        seen_left[w] = 1;
        frontier.push_back(w);
      }
    }
  }
  std::sort(frontier.begin(), frontier.end());
  return frontier;
}

MatchingResult has_left_perfect_matching(const BipartiteMultigraph& g) {
  auto mm = maximum_matching(g);
  if (mm.is_left_perfect()) return MatchingResult::matched(std::move(mm.left_mate));
  return MatchingResult::unmatched(hall_violator(g, mm));
}

MatchingResult has_matching_for_subset(const BipartiteMultigraph& g,
                                       std::span<const Node> subset) {
  std::vector<Node> members(subset.begin(), subset.end());
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());

  const auto sub = g.induced(members);
  auto result = has_left_perfect_matching(sub);
  if (result) {
    std::vector<Node> assignment(g.left_count(), kUnmatched);
    for (std::size_t i = 0; i < members.size(); ++i) assignment[members[i]] = result.assignment()[i];
    return MatchingResult::matched(std::move(assignment));
  }
  std::vector<Node> violator;
  violator.reserve(result.violator().size());
  for (Node i : result.violator()) violator.push_back(members[i]);
  return MatchingResult::unmatched(std::move(violator));
}

bool witness_is_sound(const BipartiteMultigraph& g, const MatchingResult& result,
                      std::span<const Node> subset) {
  const std::size_t n = g.left_count();
  std::vector<char> in_scope(n, subset.empty() ? 1 : 0);
  for (Node x : subset) {
    if (x >= n) return false;
    in_scope[x] = 1;
  }

  if (result.is_matched()) {
    const auto& a = result.assignment();
    if (a.size() != n) return false;
    std::vector<char> used(g.right_count(), 0);
    for (std::size_t x = 0; x < n; ++x) {
      if (!in_scope[x]) {
        if (a[x] != kUnmatched) return false;
        continue;
      }
      const Node v = a[x];
      if (v >= g.right_count() || used[v]) return false;
      const auto row = g.neighbors(x);
      if (std::find(row.begin(), row.end(), v) == row.end()) return false;
      used[v] = 1;
    }
    return true;
  }

  const auto& violator = result.violator();
  if (violator.empty()) return false;
  std::vector<char> hit(g.right_count(), 0);
  std::size_t neighborhood = 0;
  for (Node x : violator) {
    if (x >= n || !in_scope[x]) return false;
    for (Node v : g.neighbors(x)) {
      if (!hit[v]) {
        hit[v] = 1;
        ++neighborhood;
      }
    }
  }
  return neighborhood < violator.size();
}

}  // namespace lpm
