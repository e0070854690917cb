#include "lpmatch/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "lpmatch/rng.hpp"

namespace lpm {

namespace {

constexpr double kKeepTolerance = 1e-12;
constexpr double kRenormalizeTolerance = 1e-9;
constexpr double kSplitTolerance = 1e-9;

}  // namespace

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NegativeProbability: return "NegativeProbability";
    case Errc::SumNotOne: return "SumNotOne";
    case Errc::DuplicateDegree: return "DuplicateDegree";
    case Errc::DegreeZero: return "DegreeZero";
    case Errc::DegreeExceedsM: return "DegreeExceedsM";
    case Errc::NonIntegralSplit: return "NonIntegralSplit";
    case Errc::MeanMismatch: return "MeanMismatch";
    case Errc::InvalidGraph: return "InvalidGraph";
    case Errc::NoMatchingExists: return "NoMatchingExists";
    case Errc::InstanceTooLarge: return "InstanceTooLarge";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::ParseError: return "ParseError";
    case Errc::UnknownKey: return "UnknownKey";
    case Errc::InvalidValue: return "InvalidValue";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// DegreeDistribution

DegreeDistribution::DegreeDistribution(std::vector<DegreeMass> support)
    : support_(std::move(support)) {
  cumulative_.reserve(support_.size());
  double running = 0.0;
  for (const auto& [degree, probability] : support_) {
    running += probability;
    cumulative_.push_back(running);
    mean_ += degree * probability;
  }
}

DegreeDistribution DegreeDistribution::point_mass(unsigned degree) {
  return make_distribution({{degree, 1.0}});
}

double DegreeDistribution::probability(unsigned degree) const noexcept {
  auto it = std::lower_bound(support_.begin(), support_.end(), degree,
                             [](const DegreeMass& e, unsigned d) { return e.degree < d; });
  return (it != support_.end() && it->degree == degree) ? it->probability : 0.0;
}

void DegreeDistribution::check_against(std::size_t m) const {
  if (max_degree() > m) {
    throw Error(Errc::DegreeExceedsM, "degree " + std::to_string(max_degree()) +
                                          " exceeds right side size " + std::to_string(m));
  }
}

unsigned DegreeDistribution::quantile(double u) const noexcept {
  for (std::size_t i = 0; i + 1 < support_.size(); ++i) {
    if (u < cumulative_[i]) return support_[i].degree;
  }
  return support_.back().degree;
}

bool operator==(const DegreeDistribution& a, const DegreeDistribution& b) noexcept {
  return std::equal(a.support_.begin(), a.support_.end(), b.support_.begin(), b.support_.end(),
                    [](const DegreeMass& x, const DegreeMass& y) {
                      return x.degree == y.degree && x.probability == y.probability;
                    });
}

DegreeDistribution make_distribution(std::span<const DegreeMass> entries) {
  std::vector<DegreeMass> sorted(entries.begin(), entries.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const DegreeMass& a, const DegreeMass& b) { return a.degree < b.degree; });

  double total = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& e = sorted[i];
    if (e.degree == 0) throw Error(Errc::DegreeZero, "degree must be at least 1");
    if (!(e.probability >= 0.0) || !std::isfinite(e.probability)) {
      throw Error(Errc::NegativeProbability,
                  "degree " + std::to_string(e.degree) + " has invalid mass");
    }
    if (i > 0 && sorted[i - 1].degree == e.degree) {
      throw Error(Errc::DuplicateDegree, "degree " + std::to_string(e.degree) + " listed twice");
    }
    total += e.probability;
  }

  const double deviation = std::abs(total - 1.0);
  if (!(deviation <= kRenormalizeTolerance)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "masses sum to " << total;
    throw Error(Errc::SumNotOne, msg.str());
  }
  if (deviation > kKeepTolerance) {
    for (auto& e : sorted) e.probability /= total;
  }

  std::erase_if(sorted, [](const DegreeMass& e) { return e.probability == 0.0; });
  return DegreeDistribution(std::move(sorted));
}

// ---------------------------------------------------------------------------
// DegreeSpec

DegreeSpec::DegreeSpec(std::vector<DegreeDistribution> per_node) : per_node_(std::move(per_node)) {
  if (per_node_.empty()) {
    throw Error(Errc::PreconditionViolated, "a degree spec needs at least one left node");
  }
  double sum = 0.0;
  for (const auto& d : per_node_) sum += d.mean();
  average_mean_ = sum / static_cast<double>(per_node_.size());
}

unsigned DegreeSpec::max_degree() const noexcept {
  unsigned result = 0;
  for (const auto& d : per_node_) result = std::max(result, d.max_degree());
  return result;
}

DegreeSpec split_spec(std::size_t n, unsigned l, std::size_t low_count) {
  if (l == 0 || low_count > n) {
    throw Error(Errc::PreconditionViolated, "split_spec needs l >= 1 and low_count <= n");
  }
  const auto low = DegreeDistribution::point_mass(l);
  const auto high = DegreeDistribution::point_mass(l + 1);
  std::vector<DegreeDistribution> nodes;
  nodes.reserve(n);
  for (std::size_t x = 0; x < n; ++x) nodes.push_back(x < low_count ? low : high);
  return DegreeSpec(std::move(nodes));
}

DegreeSpec near_optimal_spec(std::size_t n, double dbar, SpecMode mode,
                             std::span<const double> custom_p) {
  if (n < 2) throw Error(Errc::PreconditionViolated, "need n >= 2");
  if (!(dbar >= 2.0) || !std::isfinite(dbar)) {
    throw Error(Errc::PreconditionViolated, "need dbar >= 2");
  }
  const double lo = std::floor(dbar);
  const double alpha = std::ceil(dbar) - dbar;
  const auto l = static_cast<unsigned>(lo);

  if (alpha == 0.0) {
    return DegreeSpec(std::vector<DegreeDistribution>(n, DegreeDistribution::point_mass(l)));
  }

  switch (mode) {
    case SpecMode::Fixed: {
      const double low_nodes = alpha * static_cast<double>(n);
      const double rounded = std::round(low_nodes);
      if (std::abs(low_nodes - rounded) > kSplitTolerance) {
        throw Error(Errc::NonIntegralSplit, "alpha * n is not an integer");
      }
      return split_spec(n, l, static_cast<std::size_t>(rounded));
    }
    case SpecMode::Binomial: {
      const auto d = make_distribution({{l, alpha}, {l + 1, 1.0 - alpha}});
      return DegreeSpec(std::vector<DegreeDistribution>(n, d));
    }
    case SpecMode::Custom: {
      if (custom_p.size() != n) {
        throw Error(Errc::PreconditionViolated, "custom mode needs one p_x per node");
      }
      const double mean_p =
          std::accumulate(custom_p.begin(), custom_p.end(), 0.0) / static_cast<double>(n);
      if (std::abs(mean_p - alpha) > kSplitTolerance) {
        throw Error(Errc::MeanMismatch, "mean of p_x must equal ceil(dbar) - dbar");
      }
      std::vector<DegreeDistribution> nodes;
      nodes.reserve(n);
      for (double p : custom_p) {
        if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::InvalidValue, "p_x outside [0, 1]");
        nodes.push_back(make_distribution({{l, p}, {l + 1, 1.0 - p}}));
      }
      return DegreeSpec(std::move(nodes));
    }
  }
  throw Error(Errc::InvalidValue, "unknown spec mode");
}

// ---------------------------------------------------------------------------
// BipartiteMultigraph

BipartiteMultigraph::BipartiteMultigraph(std::size_t right_count,
                                         const std::vector<std::vector<Node>>& adjacency)
    : BipartiteMultigraph(right_count) {
  for (const auto& row : adjacency) add_left_node(row);
}

void BipartiteMultigraph::add_left_node(std::span<const Node> neighbors) {
  if (neighbors.empty()) {
    throw Error(Errc::InvalidGraph,
                "left node " + std::to_string(left_count()) + " has no neighbors");
  }
  for (Node v : neighbors) {
    if (v >= m_) {
      throw Error(Errc::InvalidGraph, "right index " + std::to_string(v) + " out of range");
    }
  }
  targets_.insert(targets_.end(), neighbors.begin(), neighbors.end());
  offsets_.push_back(targets_.size());
}

std::vector<Node> BipartiteMultigraph::support(std::size_t x) const {
  auto row = neighbors(x);
  std::vector<Node> out(row.begin(), row.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

BipartiteMultigraph BipartiteMultigraph::induced(std::span<const Node> left_nodes) const {
  BipartiteMultigraph out(m_);
  for (Node x : left_nodes) {
    if (x >= left_count()) {
      throw Error(Errc::PreconditionViolated, "left node " + std::to_string(x) + " not in graph");
    }
    out.add_left_node(neighbors(x));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

void draw_with_replacement(Xoshiro256& rng, std::size_t m, unsigned d, std::vector<Node>& out) {
  for (unsigned i = 0; i < d; ++i) out.push_back(static_cast<Node>(rng.below(m)));
}

void draw_without_replacement(Xoshiro256& rng, std::size_t m, unsigned d,
                              std::vector<Node>& out) {
  if (2 * static_cast<std::size_t>(d) <= m) {
    while (out.size() < d) {
      const auto v = static_cast<Node>(rng.below(m));
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
    return;
  }
  // Dense case: partial Fisher-Yates over the whole right side.
  std::vector<Node> pool(m);
  std::iota(pool.begin(), pool.end(), Node{0});
  for (unsigned i = 0; i < d; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(m - i));
    std::swap(pool[i], pool[j]);
    out.push_back(pool[i]);
  }
}

}  // namespace

BipartiteMultigraph sample_graph(const DegreeSpec& spec, std::size_t m, std::uint64_t seed,
                                 SamplingMode mode) {
  if (m == 0) throw Error(Errc::PreconditionViolated, "need m >= 1");
  if (mode == SamplingMode::WithoutReplacement) {
    for (const auto& d : spec.nodes()) d.check_against(m);
  }

  BipartiteMultigraph g(m);
  std::vector<Node> row;
  for (std::size_t x = 0; x < spec.size(); ++x) {
    Xoshiro256 rng(mix_seed(seed, x));
    const auto& dist = spec[x];
    const unsigned d = dist.is_point_mass() ? dist.min_degree() : dist.quantile(rng.uniform01());
    row.clear();
    if (mode == SamplingMode::WithReplacement) {
      draw_with_replacement(rng, m, d, row);
    } else {
      draw_without_replacement(rng, m, d, row);
    }
    g.add_left_node(row);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Serialization

void write_graph(std::ostream& out, const BipartiteMultigraph& g) {
  out << g.left_count() << ' ' << g.right_count() << '\n';
  for (std::size_t x = 0; x < g.left_count(); ++x) {
    const auto row = g.neighbors(x);
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << row[i];
    out << '\n';
  }
}

BipartiteMultigraph read_graph(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto parse_error = [&](const std::string& what) {
    return Error(Errc::ParseError, "line " + std::to_string(line_no) + ": " + what);
  };

  std::size_t n = 0;
  std::size_t m = 0;
  bool have_header = false;
  while (!have_header && std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string extra;
    if (!(fields >> n)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw parse_error("expected header `n m`");
    }
    if (!(fields >> m) || (fields >> extra)) throw parse_error("expected header `n m`");
    have_header = true;
  }
  if (!have_header) throw parse_error("missing header");

  BipartiteMultigraph g(m);
  std::vector<Node> row;
  while (g.left_count() < n) {
    if (!std::getline(in, line)) throw parse_error("expected " + std::to_string(n) + " rows");
    ++line_no;
    std::istringstream fields(line);
    row.clear();
    long long v = 0;
    while (fields >> v) {
      if (v < 0 || static_cast<unsigned long long>(v) >= m) {
        throw parse_error("right index " + std::to_string(v) + " out of range");
      }
      row.push_back(static_cast<Node>(v));
    }
    if (!fields.eof()) throw parse_error("non-numeric token");
    if (row.empty()) throw parse_error("left node without neighbors");
    g.add_left_node(row);
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") != std::string::npos) {
      throw parse_error("trailing data after " + std::to_string(n) + " rows");
    }
  }
  return g;
}

}  // namespace lpm
