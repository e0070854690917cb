#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <vector>

#include "lpmatch/error.hpp"

namespace lpm {

using Node = std::uint32_t;

struct DegreeMass {
  unsigned degree;
  double probability;
};

/// Probability mass function over the number of right neighbors of one left
/// node. The support is sorted ascending, distinct, and holds only degrees
/// with nonzero mass.
class DegreeDistribution {
 public:
  static DegreeDistribution point_mass(unsigned degree);

  std::span<const DegreeMass> support() const noexcept { return support_; }
  double probability(unsigned degree) const noexcept;
  double mean() const noexcept { return mean_; }
  unsigned min_degree() const noexcept { return support_.front().degree; }
  unsigned max_degree() const noexcept { return support_.back().degree; }
  bool is_point_mass() const noexcept { return support_.size() == 1; }

  /// Throws DegreeExceedsM when some supported degree is larger than m.
  void check_against(std::size_t m) const;

  /// Inverse-CDF lookup: the smallest degree whose cumulative mass exceeds u.
  unsigned quantile(double u) const noexcept;

  friend bool operator==(const DegreeDistribution& a, const DegreeDistribution& b) noexcept;

 private:
  friend DegreeDistribution make_distribution(std::span<const DegreeMass> entries);
  explicit DegreeDistribution(std::vector<DegreeMass> support);

  std::vector<DegreeMass> support_;
  std::vector<double> cumulative_;
  double mean_ = 0.0;
};

/// Validates and sorts `entries`. A total mass within 1e-12 of one is kept
/// as given; within 1e-9 it is renormalized; anything further is rejected
/// with SumNotOne. Zero-mass entries are dropped after validation.
DegreeDistribution make_distribution(std::span<const DegreeMass> entries);

inline DegreeDistribution make_distribution(std::initializer_list<DegreeMass> entries) {
  return make_distribution(std::span<const DegreeMass>(entries.begin(), entries.size()));
}

/// One degree distribution per left node, plus the cached average mean.
class DegreeSpec {
 public:
  explicit DegreeSpec(std::vector<DegreeDistribution> per_node);

  std::size_t size() const noexcept { return per_node_.size(); }
  const DegreeDistribution& operator[](std::size_t x) const noexcept { return per_node_[x]; }
  std::span<const DegreeDistribution> nodes() const noexcept { return per_node_; }
  double average_mean() const noexcept { return average_mean_; }
  unsigned max_degree() const noexcept;

 private:
  std::vector<DegreeDistribution> per_node_;
  double average_mean_ = 0.0;
};

inline double average_mean(const DegreeSpec& spec) noexcept { return spec.average_mean(); }

enum class SpecMode { Fixed, Binomial, Custom };

/// Degree specs concentrated on floor(dbar) and ceil(dbar).
///
/// Fixed: the first alpha*n nodes get a point mass at floor(dbar), the rest
/// at ceil(dbar), where alpha = ceil(dbar) - dbar. Requires alpha*n to be an
/// integer (within 1e-9), else NonIntegralSplit.
/// Binomial: every node gets rho(floor) = alpha, rho(ceil) = 1 - alpha.
/// Custom: node x gets rho(floor) = p[x]; the mean of p must equal alpha
/// within 1e-9, else MeanMismatch.
/// Integral dbar yields a point mass at dbar for every node in all modes.
DegreeSpec near_optimal_spec(std::size_t n, double dbar, SpecMode mode,
                             std::span<const double> custom_p = {});

/// Fixed-degree spec with `low_count` nodes at degree `l` and the rest at
/// `l + 1`. Used by the experiment harness, which rounds alpha*n itself.
DegreeSpec split_spec(std::size_t n, unsigned l, std::size_t low_count);

enum class SamplingMode { WithReplacement, WithoutReplacement };

/// Left nodes 0..n-1, right nodes 0..m-1; each left node keeps the multiset
/// of right neighbors it drew, in draw order. Stored compressed (CSR).
class BipartiteMultigraph {
 public:
  explicit BipartiteMultigraph(std::size_t right_count = 0) : m_(right_count), offsets_{0} {}
  BipartiteMultigraph(std::size_t right_count, const std::vector<std::vector<Node>>& adjacency);

  /// Throws InvalidGraph for an empty neighbor list or an index >= m.
  void add_left_node(std::span<const Node> neighbors);
  void add_left_node(std::initializer_list<Node> neighbors) {
    add_left_node(std::span<const Node>(neighbors.begin(), neighbors.size()));
  }

  std::size_t left_count() const noexcept { return offsets_.size() - 1; }
  std::size_t right_count() const noexcept { return m_; }
  std::size_t edge_count() const noexcept { return targets_.size(); }
  std::size_t degree(std::size_t x) const noexcept { return offsets_[x + 1] - offsets_[x]; }

  std::span<const Node> neighbors(std::size_t x) const noexcept {
    return {targets_.data() + offsets_[x], targets_.data() + offsets_[x + 1]};
  }

  /// Sorted, de-duplicated neighbor set of x (parallel edges collapsed).
  std::vector<Node> support(std::size_t x) const;

  /// Induced subgraph on the given left nodes (in the given order); right
  /// side unchanged.
  BipartiteMultigraph induced(std::span<const Node> left_nodes) const;

  friend bool operator==(const BipartiteMultigraph&, const BipartiteMultigraph&) = default;

 private:
  std::size_t m_;
  std::vector<std::size_t> offsets_;
  std::vector<Node> targets_;
};

/// Node x draws its degree and then its neighbors from a Xoshiro256 seeded
/// with mix_seed(seed, x); nodes are processed in index order. The result is
/// a pure function of (spec, m, seed, mode).
BipartiteMultigraph sample_graph(const DegreeSpec& spec, std::size_t m, std::uint64_t seed,
                                 SamplingMode mode);

/// Text format: a header line `n m`, then one line per left node with its
/// neighbors as space-separated 0-based indices.
void write_graph(std::ostream& out, const BipartiteMultigraph& g);
BipartiteMultigraph read_graph(std::istream& in);

}  // namespace lpm
