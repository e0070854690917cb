#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

namespace lpm::oracle {

namespace {

using Counts = std::map<std::uint32_t, std::uint64_t>;

bool assign(const BipartiteMultigraph& g, std::size_t x, std::vector<char>& used,
            std::vector<Node>& out) {
  if (x == g.left_count()) return true;
  for (Node v : g.neighbors(x)) {
    if (used[v]) continue;
    used[v] = 1;
    out[x] = v;
    if (assign(g, x + 1, used, out)) return true;
    used[v] = 0;
  }
  return false;
}

// Support-set counts of all neighbor tuples of length d over m nodes.
Counts tuple_masks(unsigned d, std::size_t m, bool distinct) {
  Counts counts;
  std::vector<std::size_t> tuple(d, 0);
  while (true) {
    std::uint32_t mask = 0;
    bool ok = true;
    for (auto v : tuple) {
      if (distinct && (mask >> v & 1u)) ok = false;
      mask |= std::uint32_t{1} << v;
    }
    if (ok) ++counts[mask];
    std::size_t i = 0;
    while (i < d && ++tuple[i] == m) tuple[i++] = 0;
    if (i == d) break;
  }
  return counts;
}

std::vector<Node> members(std::uint32_t mask) {
  std::vector<Node> out;
  for (Node v = 0; v < 32; ++v) {
    if (mask >> v & 1u) out.push_back(v);
  }
  return out;
}

BipartiteMultigraph extended(const BipartiteMultigraph& g, std::span<const std::uint32_t> masks) {
  BipartiteMultigraph out(g.right_count());
  for (std::size_t x = 0; x < g.left_count(); ++x) out.add_left_node(g.neighbors(x));
  for (auto mask : masks) out.add_left_node(members(mask));
  return out;
}

}  // namespace

std::optional<std::vector<Node>> find_assignment(const BipartiteMultigraph& g) {
  std::vector<char> used(g.right_count(), 0);
  std::vector<Node> out(g.left_count());
  if (assign(g, 0, used, out)) return out;
  return std::nullopt;
}

bool matchable(const BipartiteMultigraph& g) { return find_assignment(g).has_value(); }

std::uint64_t count_matchings_ryser(const BipartiteMultigraph& g) {
  const std::size_t n = g.left_count();
  const std::size_t m = g.right_count();
  if (n > m) return 0;
  std::vector<std::uint32_t> rows(m, (std::uint32_t{1} << m) - 1);
  for (std::size_t x = 0; x < n; ++x) {
    rows[x] = 0;
    for (Node v : g.neighbors(x)) rows[x] |= std::uint32_t{1} << v;
  }
  // perm(A) = (-1)^m sum_S (-1)^|S| prod_i |row_i & S|
  std::int64_t total = 0;
  for (std::uint32_t s = 1; s < (std::uint32_t{1} << m); ++s) {
    std::int64_t product = 1;
    for (auto row : rows) {
      product *= std::popcount(row & s);
      if (product == 0) break;
    }
    const bool odd = (m - std::popcount(s)) % 2 == 1;
    total += odd ? -product : product;
  }
  std::int64_t padding = 1;
  for (std::size_t i = 2; i <= m - n; ++i) padding *= static_cast<std::int64_t>(i);
  return static_cast<std::uint64_t>(total / padding);
}

std::vector<std::vector<Node>> all_matchings(const BipartiteMultigraph& g) {
  std::vector<std::vector<Node>> out;
  std::vector<Node> current(g.left_count());
  std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t x, std::uint32_t used) {
    if (x == g.left_count()) {
      out.push_back(current);
      return;
    }
    std::uint32_t tried = 0;
    for (Node v : g.neighbors(x)) {
      const std::uint32_t bit = std::uint32_t{1} << v;
      if ((used | tried) & bit) continue;
      tried |= bit;
      current[x] = v;
      rec(x + 1, used | bit);
    }
  };
  rec(0, 0);
  return out;
}

Structure structure(const BipartiteMultigraph& g) {
  const std::size_t m = g.right_count();
  const auto matchings = all_matchings(g);
  if (matchings.empty()) throw Error(Errc::NoMatchingExists, "oracle: no matching");

  std::vector<std::uint32_t> used_masks;
  std::vector<std::size_t> matched_in(m, 0);
  for (const auto& a : matchings) {
    std::uint32_t mask = 0;
    for (Node v : a) {
      mask |= std::uint32_t{1} << v;
      ++matched_in[v];
    }
    used_masks.push_back(mask);
  }

  Structure s;
  s.classes.resize(m);
  for (std::size_t v = 0; v < m; ++v) {
    if (matched_in[v] == matchings.size()) s.classes[v] = NodeClass::Blocked;
    else if (matched_in[v] == 0) s.classes[v] = NodeClass::Free;
    else s.classes[v] = NodeClass::HalfFree;
  }

  s.h.assign(m, std::vector<char>(m, 0));
  for (auto mask : used_masks) {
    for (std::size_t u = 0; u < m; ++u) {
      for (std::size_t v = u + 1; v < m; ++v) {
        if (!(mask >> u & 1u) && !(mask >> v & 1u)) s.h[u][v] = s.h[v][u] = 1;
      }
    }
  }

  std::vector<Node> open;
  for (std::size_t v = 0; v < m; ++v) {
    if (s.classes[v] == NodeClass::Blocked) s.partition.blocked.push_back(static_cast<Node>(v));
    else open.push_back(static_cast<Node>(v));
  }
  for (Node a : open) {
    for (Node b : open) {
      for (Node c : open) {
        if (a != b && b != c && a != c && !s.h[a][b] && !s.h[b][c] && s.h[a][c]) {
          s.transitive = false;
        }
      }
    }
  }

  // Components of the "no H-edge" relation.
  std::vector<Node> label(m);
  std::iota(label.begin(), label.end(), 0);
  std::function<Node(Node)> find = [&](Node v) { return label[v] == v ? v : label[v] = find(label[v]); };
  for (Node a : open) {
    for (Node b : open) {
      if (a < b && !s.h[a][b]) label[find(b)] = find(a);
    }
  }
  std::map<Node, std::vector<Node>> groups;
  for (Node v : open) groups[find(v)].push_back(v);
  for (auto& [root, cls] : groups) s.partition.classes.push_back(cls);
  std::sort(s.partition.classes.begin(), s.partition.classes.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a.front() < b.front();
  });
  s.partition.bi.b = s.partition.blocked.size();
  for (const auto& cls : s.partition.classes) s.partition.bi.sizes.push_back(cls.size());
  return s;
}

Rational fail(unsigned d_y, unsigned d_z, const BipartiteMultigraph& g_rest) {
  const std::size_t m = g_rest.right_count();
  const auto ys = tuple_masks(d_y, m, false);
  const auto zs = tuple_masks(d_z, m, false);
  boost::multiprecision::cpp_int failures = 0;
  for (const auto& [my, cy] : ys) {
    for (const auto& [mz, cz] : zs) {
      const std::uint32_t masks[2] = {my, mz};
      if (!matchable(extended(g_rest, masks))) failures += boost::multiprecision::cpp_int(cy) * cz;
    }
  }
  return Rational(failures, boost::multiprecision::pow(boost::multiprecision::cpp_int(m), d_y + d_z));
}

Rational success_probability(const DegreeSpec& spec, std::size_t m, SamplingMode mode) {
  const bool distinct = mode == SamplingMode::WithoutReplacement;
  std::vector<std::vector<std::pair<std::uint32_t, Rational>>> per_node;
  for (const auto& rho : spec.nodes()) {
    std::map<std::uint32_t, Rational> acc;
    for (const auto& [d, p] : rho.support()) {
      const auto counts = tuple_masks(d, m, distinct);
      std::uint64_t total = 0;
      for (const auto& [mask, c] : counts) total += c;
      for (const auto& [mask, c] : counts) acc[mask] += Rational(p) * Rational(c, total);
    }
    per_node.emplace_back(acc.begin(), acc.end());
  }

  Rational success = 0;
  std::vector<std::uint32_t> chosen;
  const BipartiteMultigraph empty(m);
  std::function<void(std::size_t, const Rational&)> rec = [&](std::size_t x, const Rational& w) {
    if (x == per_node.size()) {
      if (matchable(extended(empty, chosen))) success += w;
      return;
    }
    for (const auto& [mask, p] : per_node[x]) {
      chosen.push_back(mask);
      rec(x + 1, w * p);
      chosen.pop_back();
    }
  };
  rec(0, Rational(1));
  return success;
}

double uniform_threshold(unsigned k) {
  auto ratio = [](long double xi) {
    const long double t = 1.0L - std::exp(-xi);
    return xi * t / (t - xi * std::exp(-xi));
  };
  long double lo = 1e-3L;
  long double hi = 100.0L;
  for (int i = 0; i < 200; ++i) {
    const long double mid = 0.5L * (lo + hi);
    (ratio(mid) < k ? lo : hi) = mid;
  }
  const long double xi = 0.5L * (lo + hi);
  const long double t = 1.0L - std::exp(-xi);
  return static_cast<double>(xi / (k * std::pow(t, static_cast<long double>(k - 1))));
}

}  // namespace lpm::oracle
