#include "suites.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include "lpmatch/matching.hpp"
#include "lpmatch/rng.hpp"
#include "lpmatch/structure.hpp"
#include "lpmatch/threshold.hpp"
#include "oracles.hpp"

namespace lpm::verify {

namespace {

std::size_t count_or(const SuiteOptions& opt, std::size_t fallback) {
  return opt.instances ? opt.instances : fallback;
}

std::string describe(const BipartiteMultigraph& g) {
  std::ostringstream out;
  out << g.left_count() << 'x' << g.right_count() << " [";
  for (std::size_t x = 0; x < g.left_count(); ++x) {
    out << (x ? " |" : "");
    for (Node v : g.neighbors(x)) out << ' ' << v;
  }
  out << " ]";
  return out.str();
}

// Records the first failure only; later ones are just counted.
struct Tally {
  SuiteResult& result;

  void check(bool ok, const std::string& what) {
    ++result.checked;
    if (ok) return;
    if (result.failures++ == 0) result.detail = what;
  }
};

BipartiteMultigraph random_graph(Xoshiro256& rng, std::size_t max_m, bool allow_empty) {
  const std::size_t m = 1 + rng.below(max_m);
  const std::size_t lo = allow_empty ? 0 : 1;
  const std::size_t n = lo + rng.below(m + 1 - lo);
  const bool distinct = rng.below(4) == 0;
  BipartiteMultigraph g(m);
  std::vector<Node> row;
  for (std::size_t x = 0; x < n; ++x) {
    const std::size_t d = 1 + rng.below(std::min<std::size_t>(3, m));
    row.clear();
    while (row.size() < d) {
      const auto v = static_cast<Node>(rng.below(m));
      if (distinct && std::find(row.begin(), row.end(), v) != row.end()) continue;
      row.push_back(v);
    }
    g.add_left_node(row);
  }
  return g;
}

BipartiteMultigraph random_matchable(Xoshiro256& rng, std::size_t max_m, bool allow_empty) {
  while (true) {
    auto g = random_graph(rng, max_m, allow_empty);
    if (oracle::matchable(g)) return g;
  }
}

std::vector<std::pair<Node, Node>> oracle_edges(const oracle::Structure& s,
                                                const std::vector<Node>& nodes) {
  std::vector<std::pair<Node, Node>> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      if (s.h[nodes[i]][nodes[j]]) out.emplace_back(nodes[i], nodes[j]);
    }
  }
  return out;
}

std::vector<Node> non_blocked(const std::vector<NodeClass>& classes) {
  std::vector<Node> out;
  for (std::size_t v = 0; v < classes.size(); ++v) {
    if (classes[v] != NodeClass::Blocked) out.push_back(static_cast<Node>(v));
  }
  return out;
}

// H restricted to `subset` (bitmask over indices of `nodes`): true when it
// has no edge or is connected.
bool edgeless_or_connected(const oracle::Structure& s, const std::vector<Node>& nodes,
                           std::uint32_t subset) {
  std::vector<Node> vs;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (subset >> i & 1u) vs.push_back(nodes[i]);
  }
  bool any_edge = false;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (std::size_t j = i + 1; j < vs.size(); ++j) any_edge |= s.h[vs[i]][vs[j]] != 0;
  }
  if (!any_edge) return true;
  std::vector<char> seen(vs.size(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const auto i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < vs.size(); ++j) {
      if (!seen[j] && s.h[vs[i]][vs[j]]) {
        seen[j] = 1;
        ++reached;
        stack.push_back(j);
      }
    }
  }
  return reached == vs.size();
}

SuiteResult grid_result(const char* name, const GridSummary& s) {
  SuiteResult r{name, s.total, s.total - s.holds, {}};
  std::ostringstream detail;
  detail << "holds=" << s.holds << " ties=" << s.ties << " violated=" << s.violated
         << " failing_with_b>0=" << s.failing_with_blocked;
  r.detail = detail.str();
  return r;
}

}  // namespace

std::string SuiteResult::summary() const {
  std::string s = name + ": " + std::to_string(checked) + " checked, " + std::to_string(failures) +
                  " failed";
  if (!detail.empty()) s += "; " + detail;
  return s;
}

SuiteResult structure_suite(const SuiteOptions& opt) {
  SuiteResult result{"structure", 0, 0, {}};
  Tally t{result};
  Xoshiro256 rng(mix_seed(opt.seed, 5));
  const std::size_t instances = count_or(opt, 1000);
  for (std::size_t i = 0; i < instances; ++i) {
    const auto g = random_matchable(rng, 7, false);
    const auto tag = "instance " + std::to_string(i) + " " + describe(g) + ": ";
    const auto s = oracle::structure(g);

    t.check(classify_right_nodes(g) == s.classes, tag + "classification differs");
    t.check(bi_partition(g) == s.partition, tag + "partition differs");
    const auto nodes = non_blocked(s.classes);
    const auto expected = oracle_edges(s, nodes);
    t.check(h_graph_edges(g, nodes, HEdgeMethod::Repair) == expected, tag + "repair H-edges differ");
    t.check(h_graph_edges(g, nodes, HEdgeMethod::Enumeration) == expected,
            tag + "enumerated H-edges differ");

    const auto count = enumerate_left_perfect_matchings(g).size();
    t.check(count == oracle::count_matchings_ryser(g) && count == oracle::all_matchings(g).size(),
            tag + "matching count differs from the permanent");

    // Decision and certificate on an unfiltered graph too.
    const auto h = random_graph(rng, 7, false);
    const auto decision = has_left_perfect_matching(h);
    t.check(decision.is_matched() == oracle::matchable(h) && witness_is_sound(h, decision),
            "instance " + std::to_string(i) + " " + describe(h) + ": matching decision");
  }
  return result;
}

SuiteResult claims_suite(const SuiteOptions& opt) {
  SuiteResult result{"claims", 0, 0, {}};
  Tally t{result};
  Xoshiro256 rng(mix_seed(opt.seed, 8));
  const std::size_t instances = count_or(opt, 1000);
  for (std::size_t i = 0; i < instances; ++i) {
    const auto g = random_matchable(rng, 7, false);
    const auto tag = "instance " + std::to_string(i) + " " + describe(g) + ": ";
    const auto s = oracle::structure(g);
    const auto nodes = non_blocked(s.classes);

    bool connected = true;
    for (std::uint32_t subset = 1; subset < (std::uint32_t{1} << nodes.size()); ++subset) {
      connected = connected && edgeless_or_connected(s, nodes, subset);
    }
    t.check(connected, tag + "some H_V with an edge is disconnected");
    t.check(s.transitive, tag + "no-edge relation is not transitive");

    const auto partition = bi_partition(g);
    bool complete = true;
    for (std::size_t a = 0; a < partition.classes.size(); ++a) {
      for (std::size_t b = a + 1; b < partition.classes.size(); ++b) {
        for (Node u : partition.classes[a]) {
          for (Node v : partition.classes[b]) complete = complete && s.h[u][v];
        }
      }
    }
    t.check(complete, tag + "cross-class pair without an H-edge");
    t.check(partition.bi.total() == g.right_count(), tag + "b + sum(i_j) != m");
  }
  return result;
}

SuiteResult failprob_suite(const SuiteOptions& opt) {
  SuiteResult result{"failprob", 0, 0, {}};
  Tally t{result};
  Xoshiro256 rng(mix_seed(opt.seed, 6));
  const std::size_t instances = count_or(opt, 500);
  for (std::size_t i = 0; i < instances; ++i) {
    const auto g = random_matchable(rng, 6, true);
    const auto dy = static_cast<unsigned>(1 + rng.below(3));
    const auto dz = static_cast<unsigned>(1 + rng.below(3));
    const auto truth = oracle::fail(dy, dz, g);
    const double closed = fail_total(dy, dz, g);
    std::ostringstream tag;
    tag << "instance " << i << ' ' << describe(g) << " d=(" << dy << ',' << dz << "): closed "
        << closed << " vs brute force " << truth.convert_to<double>();
    t.check(std::abs(closed - truth.convert_to<double>()) <= 1e-12, tag.str());
    t.check(fail_exact(dy, dz, bi_partition(g).bi, g.right_count()) == truth,
            tag.str() + " (exact)");
  }
  return result;
}

SuiteResult lemma2_suite(const SuiteOptions& opt) {
  if (opt.rows) write_grid_header(*opt.rows);
  std::function<void(const GridRow&)> sink;
  if (opt.rows) sink = [&](const GridRow& row) { write_grid_row(*opt.rows, row); };
  return grid_result("lemma2", sweep_lemma2(opt.max_m, sink));
}

SuiteResult lemma3_suite(const SuiteOptions& opt) {
  if (opt.rows) write_grid_header(*opt.rows);
  std::function<void(const GridRow&)> sink;
  if (opt.rows) sink = [&](const GridRow& row) { write_grid_row(*opt.rows, row); };
  return grid_result("lemma3", sweep_lemma3(opt.max_m, sink));
}

SuiteResult convexity_suite(const SuiteOptions&) {
  SuiteResult result{"convexity", 0, 0, {}};
  Tally t{result};
  t.check(convexity_K_check(2, NormalizedBI::from_reals(0.0, {0.5, 0.5})).holds,
          "beta=0, gamma=[1/2,1/2], l=2 should hold");
  t.check(!convexity_K_check(2, NormalizedBI::from_reals(0.5, {0.25, 0.25})).holds,
          "beta=1/2, gamma=[1/4,1/4], l=2 should fail");
  t.check(!convexity_K_check(3, NormalizedBI::from_counts({4, {1, 1}}, 6)).holds,
          "beta=2/3, gamma=[1/6,1/6], l=3 should fail");
  for (std::size_t m = 2; m <= 8; ++m) {
    for_each_bi_composition(m, 2, [&](const BIVector& bi) {
      for (unsigned l = 2; l <= 4; ++l) {
        const auto report = convexity_K_check(l, NormalizedBI::from_counts(bi, m));
        std::ostringstream tag;
        tag << "m=" << m << " b=" << bi.b << " r=" << bi.r() << " l=" << l;
        t.check(std::abs(report.derived.at("K") - (report.lhs - report.rhs)) <= 1e-12,
                tag.str() + ": K != lhs - rhs");
        if (bi.b == 0) t.check(report.holds, tag.str() + ": beta = 0 should hold");
      }
    });
  }
  return result;
}

SuiteResult lemma1_suite(const SuiteOptions& opt) {
  SuiteResult result{"lemma1", 0, 0, {}};
  Tally t{result};
  Xoshiro256 rng(mix_seed(opt.seed, 10));
  const std::size_t configs = count_or(opt, 50);
  auto eighths = [](unsigned k) { return static_cast<double>(k) / 8.0; };

  std::size_t done = 0;
  while (done < configs) {
    const std::size_t m = 3 + rng.below(3);
    const std::size_t n = 2 + rng.below(std::min<std::size_t>(m, 4) - 1);
    const std::size_t z = rng.below(n);

    std::vector<DegreeDistribution> nodes;
    for (std::size_t x = 0; x < n; ++x) {
      const auto d = static_cast<unsigned>(1 + rng.below(3));
      if (rng.below(2) == 0) {
        nodes.push_back(DegreeDistribution::point_mass(d));
      } else {
        const auto a = static_cast<unsigned>(1 + rng.below(7));
        nodes.push_back(make_distribution({{d, eighths(a)}, {d + 1, eighths(8 - a)}}));
      }
    }
    // Node z gets masses on l and k >= l + 2, optionally some on l + 1.
    const auto l = static_cast<unsigned>(1 + rng.below(2));
    const auto k = static_cast<unsigned>(l + 2 + rng.below(2));
    const auto a = static_cast<unsigned>(1 + rng.below(6));
    const auto b = static_cast<unsigned>(1 + rng.below(7 - a));
    const unsigned middle = 8 - a - b;
    std::vector<DegreeMass> masses{{l, eighths(a)}, {k, eighths(b)}};
    if (middle) masses.push_back({l + 1, eighths(middle)});
    nodes[z] = make_distribution(masses);
    const DegreeSpec before(nodes);

    const double eps = eighths(std::min(a, b)) / (rng.below(2) == 0 ? 1.0 : 2.0);
    const DegreeSpec after = replace_node(before, z, shift_toward_mean(nodes[z], l, k, eps));

    Rational p_before;
    Rational p_after;
    try {
      p_before = success_probability_rational(before, m, SamplingMode::WithReplacement);
      p_after = success_probability_rational(after, m, SamplingMode::WithReplacement);
    } catch (const Error& e) {
      if (e.code() == Errc::InstanceTooLarge) continue;  // draw another configuration
      throw;
    }
    ++done;
    std::ostringstream tag;
    tag << "config n=" << n << " m=" << m << " z=" << z << " l=" << l << " k=" << k
        << " eps=" << eps << ": " << p_before.convert_to<double>() << " -> "
        << p_after.convert_to<double>();
    t.check(std::abs(before.average_mean() - after.average_mean()) <= 1e-12,
            tag.str() + " (mean moved)");
    t.check(p_after > p_before, tag.str());
  }
  return result;
}

SuiteResult threshold_suite(const SuiteOptions&) {
  SuiteResult result{"threshold", 0, 0, {}};
  Tally t{result};
  for (unsigned k = 3; k <= 5; ++k) {
    const double solver = threshold_c_star(static_cast<double>(k));
    const double closed = oracle::uniform_threshold(k);
    std::ostringstream tag;
    tag.precision(8);
    tag << "k=" << k << ": solver " << solver << " vs closed form " << closed;
    t.check(std::abs(solver - closed) <= 1e-6, tag.str());
  }
  return result;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"structure", "claims",  "failprob", "lemma2",
                                              "lemma3",    "convexity", "lemma1",  "threshold"};
  return names;
}

SuiteResult run_suite(const std::string& name, const SuiteOptions& opt) {
  if (name == "structure") return structure_suite(opt);
  if (name == "claims") return claims_suite(opt);
  if (name == "failprob") return failprob_suite(opt);
  if (name == "lemma2") return lemma2_suite(opt);
  if (name == "lemma3") return lemma3_suite(opt);
  if (name == "convexity") return convexity_suite(opt);
  if (name == "lemma1") return lemma1_suite(opt);
  if (name == "threshold") return threshold_suite(opt);
  throw Error(Errc::InvalidValue, "unknown suite '" + name + "'");
}

}  // namespace lpm::verify
