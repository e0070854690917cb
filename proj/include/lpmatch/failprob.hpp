#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lpmatch/graph.hpp"
#include "lpmatch/structure.hpp"

namespace lpm {

using Rational = boost::multiprecision::cpp_rational;

/// beta = b/m and gamma_j = i_j/m. When built from integer counts the exact
/// counts are kept so the inequality checks can decide ties exactly.
struct NormalizedBI {
  double beta = 0.0;
  std::vector<double> gammas;

  struct Counts {
    BIVector bi;
    std::size_t m;
  };
  std::optional<Counts> counts;

  /// b == m (everything blocked, r == 0) is allowed; fail is then 1.
  static NormalizedBI from_counts(const BIVector& bi, std::size_t m);
  /// Validates beta in [0,1), gammas > 0 and beta + sum(gammas) == 1 within
  /// 1e-12; gammas are sorted.
  static NormalizedBI from_reals(double beta, std::vector<double> gammas);

  std::size_t r() const noexcept { return gammas.size(); }
};

/// Conditional failure probability for two extra left nodes of degrees
/// d_y and d_z, given a residual graph with the given blocked/class profile:
///
///   beta^dy + beta^dz - beta^(dy+dz)
///     + sum_j [(gamma_j+beta)^dy - beta^dy] * [(gamma_j+beta)^dz - beta^dz]
///
/// r == 1 collapses to exactly 1.
double fail_closed_form(unsigned d_y, unsigned d_z, const NormalizedBI& nbi);

/// Exact rational value of the same expression for integer counts.
Rational fail_exact(unsigned d_y, unsigned d_z, const BIVector& bi, std::size_t m);

/// Fail(d_y, d_z) for a fixed residual graph: its BI-vector is deterministic,
/// so this is the closed form at bi_partition(g_rest).
double fail_total(unsigned d_y, unsigned d_z, const BipartiteMultigraph& g_rest);

/// Outcome-space guard for success_probability_exact: the product over nodes
/// of the number of (degree, neighbor tuple) outcomes.
inline constexpr std::uint64_t kOutcomeGuard = 100'000'000;

/// Exact probability that G(spec) over m right nodes has a left-perfect
/// matching. Masses of the binary64 pmfs are taken as exact rationals.
/// Throws InstanceTooLarge above kOutcomeGuard or for m > 16.
Rational success_probability_rational(const DegreeSpec& spec, std::size_t m, SamplingMode mode);
double success_probability_exact(const DegreeSpec& spec, std::size_t m, SamplingMode mode);

/// Moves eps of mass from l to l+1 and from k to k-1 (k - l >= 2), keeping
/// the mean. Requires 0 < eps <= min(rho(l), rho(k)).
DegreeDistribution shift_toward_mean(const DegreeDistribution& rho, unsigned l, unsigned k,
                                     double eps);

/// Copy of `spec` with node z's distribution replaced.
DegreeSpec replace_node(const DegreeSpec& spec, std::size_t z, DegreeDistribution rho);

struct InequalityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  /// lhs > rhs, decided in exact arithmetic when the input carries counts.
  bool holds = false;
  std::map<std::string, double> derived;
};

/// fail(k, l) > fail(k-1, l+1). Needs k - l >= 2, l >= 1 and r >= 2.
InequalityReport lemma2_check(unsigned k, unsigned l, const NormalizedBI& nbi);

/// fail(l+1, l) + fail(l, l-1) > 2 fail(l, l). Needs l >= 2 and r >= 2.
/// derived: K0, K1.
InequalityReport lemma3_check(unsigned l, const NormalizedBI& nbi);

/// Reduced form of fail(l,l) + fail(l+1,l+1) > 2 fail(l,l+1):
///   lhs = sum_j [(gamma_j+beta)^l (1-gamma_j-beta) - beta^l (1-beta)]^2
///   rhs = beta^(2l) (1-beta)^2
/// derived: K (the raw fail combination), which equals lhs - rhs.
InequalityReport convexity_K_check(unsigned l, const NormalizedBI& nbi);

/// (b/m)^l (1 - b/m) > (b/m)^(k-1) (1 - b/m). Needs 0 < b < m, k - l >= 2.
InequalityReport appendixA_monotonicity(unsigned l, unsigned k, std::size_t b, std::size_t m);

struct PerturbationSpec {
  double p = 0.0;
  double q = 0.0;
  double epsilon = 0.0;

  /// Throws InvalidValue unless p, q, p + eps and q - eps all lie in [0,1].
  void validate() const;
};

enum class PerturbationVerdict { ImproveWithPositiveEps, ImproveWithNegativeEps, NoStrictImprovement };

std::string_view to_string(PerturbationVerdict v) noexcept;

/// Change in failure probability, -eps^2 K0 - eps L with L = (p-q) K0 + K1.
double perturbation_change(const PerturbationSpec& spec, double k0, double k1);

/// Which sign of a small eps makes perturbation_change negative. An exact
/// tie (L == 0 with K0 <= 0) reports NoStrictImprovement.
PerturbationVerdict perturbation_sign(const PerturbationSpec& spec, double k0, double k1);

// ---------------------------------------------------------------------------
// Grid sweeps over every BI composition of m with r >= 2.

/// Calls `visit` for every b in [0, m) and every ascending partition of m - b
/// into at least `min_classes` parts.
void for_each_bi_composition(std::size_t m, std::size_t min_classes,
                             const std::function<void(const BIVector&)>& visit);

struct GridRow {
  std::size_t m;
  BIVector bi;
  unsigned k;
  unsigned l;
  InequalityReport report;
  /// lhs and rhs agree exactly.
  bool tie;
};

struct GridSummary {
  std::size_t total = 0;
  std::size_t holds = 0;
  std::size_t ties = 0;
  std::size_t violated = 0;
  /// Non-holding rows with b > 0.
  std::size_t failing_with_blocked = 0;

  bool all_hold() const noexcept { return holds == total; }
};

/// lemma2_check grid: m in [2, max_m], 1 <= l, l + 2 <= k <= 6.
GridSummary sweep_lemma2(std::size_t max_m, const std::function<void(const GridRow&)>& on_row = {});
/// lemma3_check grid: m in [2, max_m], 2 <= l <= 5 (rows carry k = l + 1).
GridSummary sweep_lemma3(std::size_t max_m, const std::function<void(const GridRow&)>& on_row = {});

/// CSV `m,b,sizes,k,l,lhs,rhs,holds`; sizes are ';'-separated.
void write_grid_header(std::ostream& out);
void write_grid_row(std::ostream& out, const GridRow& row);

}  // namespace lpm
