#include "lpmatch/structure.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "lpmatch/matching.hpp"

namespace lpm {

std::string_view to_string(NodeClass c) noexcept {
  switch (c) {
    case NodeClass::Blocked: return "blocked";
    case NodeClass::Free: return "free";
    case NodeClass::HalfFree: return "half-free";
  }
  return "unknown";
}

std::size_t BIVector::total() const noexcept {
  std::size_t t = b;
  for (auto s : sizes) t += s;
  return t;
}

std::uint64_t enumeration_space(const BipartiteMultigraph& g) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t space = 1;
  for (std::size_t x = 0; x < g.left_count(); ++x) {
    const std::uint64_t k = g.support(x).size();
    if (space > kMax / k) return kMax;
    space *= k;
  }
  return space;
}

namespace {

void require_enumerable(const BipartiteMultigraph& g) {
  if (enumeration_space(g) > kEnumerationGuard) {
    throw Error(Errc::InstanceTooLarge, "enumeration search space exceeds 1e8");
  }
}

MaximumMatching perfect_matching_or_throw(const BipartiteMultigraph& g) {
  auto mm = maximum_matching(g);
  if (!mm.is_left_perfect()) {
    throw Error(Errc::NoMatchingExists, "graph has no left-perfect matching");
  }
  return mm;
}

// Re-matches a left-perfect matching after deleting up to two right nodes.
class Repair {
 public:
  Repair(const BipartiteMultigraph& g, const MaximumMatching& base)
      : g_(g), base_(base), parent_(g.right_count()), seen_(g.right_count(), 0),
        forbidden_(g.right_count(), 0) {}

  bool matchable_without(Node a, Node b) {
    left_mate_ = base_.left_mate;
    right_mate_ = base_.right_mate;
    forbidden_[a] = forbidden_[b] = 1;
    Node freed[2];
    std::size_t count = 0;
    const Node targets[2] = {a, b};
    for (std::size_t i = 0; i < (a == b ? 1u : 2u); ++i) {
      const Node v = targets[i];
      const Node x = right_mate_[v];
      if (x != kUnmatched) {
        left_mate_[x] = kUnmatched;
        right_mate_[v] = kUnmatched;
        freed[count++] = x;
      }
    }
    bool ok = true;
    for (std::size_t i = 0; i < count && ok; ++i) ok = augment(freed[i]);
    forbidden_[a] = forbidden_[b] = 0;
    return ok;
  }

 private:
  bool augment(Node root) {
    std::fill(seen_.begin(), seen_.end(), 0);
    queue_.clear();
    queue_.push_back(root);
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const Node x = queue_[head];
      for (Node v : g_.neighbors(x)) {
        if (forbidden_[v] || seen_[v]) continue;
        seen_[v] = 1;
        parent_[v] = x;
        if (right_mate_[v] == kUnmatched) {
          flip(v);
          return true;
        }
        queue_.push_back(right_mate_[v]);
      }
    }
    return false;
  }

  void flip(Node v) {
    while (true) {
      const Node x = parent_[v];
      const Node previous = left_mate_[x];
      left_mate_[x] = v;
      right_mate_[v] = x;
      if (previous == kUnmatched) return;
      v = previous;
    }
  }

  const BipartiteMultigraph& g_;
  const MaximumMatching& base_;
  std::vector<Node> left_mate_;
  std::vector<Node> right_mate_;
  std::vector<Node> parent_;
  std::vector<char> seen_;
  std::vector<char> forbidden_;
  std::vector<Node> queue_;
};

std::vector<Node> sorted_unique(std::span<const Node> nodes) {
  std::vector<Node> out(nodes.begin(), nodes.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

void for_each_left_perfect_matching(const BipartiteMultigraph& g,
                                    const std::function<bool(std::span<const Node>)>& visit) {
  require_enumerable(g);
  const std::size_t n = g.left_count();
  if (n == 0) {
    visit({});
    return;
  }
  if (n > g.right_count()) return;

  std::vector<std::vector<Node>> rows(n);
  for (std::size_t x = 0; x < n; ++x) rows[x] = g.support(x);

  std::vector<Node> assignment(n, kUnmatched);
  std::vector<std::size_t> cursor(n, 0);
  std::vector<char> used(g.right_count(), 0);
  std::size_t depth = 0;
  while (true) {
    if (cursor[depth] == rows[depth].size()) {
      cursor[depth] = 0;
      if (depth == 0) return;
      --depth;
      used[assignment[depth]] = 0;
      assignment[depth] = kUnmatched;
      ++cursor[depth];
      continue;
    }
    const Node v = rows[depth][cursor[depth]];
    if (used[v]) {
      ++cursor[depth];
      continue;
    }
    assignment[depth] = v;
    if (depth + 1 == n) {
      if (!visit(assignment)) return;
      assignment[depth] = kUnmatched;
      ++cursor[depth];
      continue;
    }
    used[v] = 1;
    ++depth;
  }
}

std::vector<std::vector<Node>> enumerate_left_perfect_matchings(const BipartiteMultigraph& g) {
  std::vector<std::vector<Node>> out;
  for_each_left_perfect_matching(g, [&](std::span<const Node> a) {
    out.emplace_back(a.begin(), a.end());
    return true;
  });
  return out;
}

std::vector<NodeClass> classify_right_nodes(const BipartiteMultigraph& g) {
  const auto mm = perfect_matching_or_throw(g);
  const std::size_t m = g.right_count();

  std::vector<std::vector<Node>> incident(m);
  for (std::size_t x = 0; x < g.left_count(); ++x) {
    for (Node v : g.support(x)) incident[v].push_back(static_cast<Node>(x));
  }

  // Even alternating paths from M-exposed right nodes reach exactly the
  // right nodes that some left-perfect matching leaves exposed.
  std::vector<char> exposable(m, 0);
  std::vector<Node> queue;
  for (std::size_t v = 0; v < m; ++v) {
    if (mm.right_mate[v] == kUnmatched) {
      exposable[v] = 1;
      queue.push_back(static_cast<Node>(v));
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (Node x : incident[queue[head]]) {
      const Node next = mm.left_mate[x];
      if (!exposable[next]) {
        exposable[next] = 1;
        queue.push_back(next);
      }
    }
  }

  std::vector<NodeClass> classes(m);
  for (std::size_t v = 0; v < m; ++v) {
    if (!exposable[v]) {
      classes[v] = NodeClass::Blocked;
    } else if (mm.right_mate[v] == kUnmatched && incident[v].empty()) {
      // Any left neighbor of an M-exposed node could be rerouted onto it.
      classes[v] = NodeClass::Free;
    } else {
      classes[v] = NodeClass::HalfFree;
    }
  }
  return classes;
}

std::vector<std::pair<Node, Node>> h_graph_edges(const BipartiteMultigraph& g,
                                                 std::span<const Node> v_set,
                                                 HEdgeMethod method) {
  const auto classes = classify_right_nodes(g);
  const auto nodes = sorted_unique(v_set);
  for (Node v : nodes) {
    if (v >= g.right_count() || classes[v] == NodeClass::Blocked) {
      throw Error(Errc::PreconditionViolated,
                  "right node " + std::to_string(v) + " is not a non-blocked node");
    }
  }

  if (method == HEdgeMethod::Auto) {
    method = enumeration_space(g) <= kEnumerationGuard ? HEdgeMethod::Enumeration
                                                       : HEdgeMethod::Repair;
  }

  std::vector<std::pair<Node, Node>> edges;
  const std::size_t k = nodes.size();
  if (method == HEdgeMethod::Enumeration) {
    std::vector<char> edge(k * k, 0);
    std::vector<char> used(g.right_count(), 0);
    std::vector<std::size_t> exposed;
    for_each_left_perfect_matching(g, [&](std::span<const Node> a) {
      for (Node v : a) used[v] = 1;
      exposed.clear();
      for (std::size_t i = 0; i < k; ++i) {
        if (!used[nodes[i]]) exposed.push_back(i);
      }
      for (std::size_t i = 0; i < exposed.size(); ++i) {
        for (std::size_t j = i + 1; j < exposed.size(); ++j) edge[exposed[i] * k + exposed[j]] = 1;
      }
      for (Node v : a) used[v] = 0;
      return true;
    });
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        if (edge[i * k + j]) edges.emplace_back(nodes[i], nodes[j]);
      }
    }
    return edges;
  }

  const auto mm = maximum_matching(g);
  Repair repair(g, mm);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (repair.matchable_without(nodes[i], nodes[j])) edges.emplace_back(nodes[i], nodes[j]);
    }
  }
  return edges;
}

CorePartition bi_partition(const BipartiteMultigraph& g) {
  const auto classes = classify_right_nodes(g);
  const auto mm = maximum_matching(g);
  Repair repair(g, mm);

  CorePartition out;
  for (std::size_t v = 0; v < classes.size(); ++v) {
    const auto node = static_cast<Node>(v);
    if (classes[v] == NodeClass::Blocked) {
      out.blocked.push_back(node);
      continue;
    }
    // v joins the first class whose representative shares no H-edge with it.
    auto home = std::find_if(out.classes.begin(), out.classes.end(), [&](const auto& cls) {
      return !repair.matchable_without(cls.front(), node);
    });
    if (home == out.classes.end()) {
      out.classes.push_back({node});
    } else {
      home->push_back(node);
    }
  }

  std::stable_sort(out.classes.begin(), out.classes.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a.front() < b.front();
  });
  out.bi.b = out.blocked.size();
  for (const auto& cls : out.classes) out.bi.sizes.push_back(cls.size());
  return out;
}

std::string to_text(const CorePartition& partition) {
  auto join = [](const auto& values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(values[i]);
    }
    return s;
  };
  std::ostringstream out;
  out << "b=" << partition.bi.b << " classes=" << join(partition.bi.sizes) << '\n';
  out << "B=" << join(partition.blocked) << '\n';
  for (std::size_t j = 0; j < partition.classes.size(); ++j) {
    out << 'I' << (j + 1) << '=' << join(partition.classes[j]) << '\n';
  }
  return out.str();
}

}  // namespace lpm
