#include "lpmatch/failprob.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <ostream>

namespace lpm {

namespace mp = boost::multiprecision;
using BigInt = mp::cpp_int;

namespace {

double ipow(double base, unsigned exponent) noexcept {
  double result = 1.0;
  while (exponent) {
    if (exponent & 1u) result *= base;
    base *= base;
    exponent >>= 1u;
  }
  return result;
}

BigInt bpow(std::size_t base, unsigned exponent) { return mp::pow(BigInt(base), exponent); }

double to_double(const Rational& q) { return q.convert_to<double>(); }

void require(bool condition, const char* what) {
  if (!condition) throw Error(Errc::PreconditionViolated, what);
}

// Numerator of fail(dy, dz) over the denominator m^(dy+dz).
BigInt fail_numerator(unsigned dy, unsigned dz, const BIVector& bi, std::size_t m) {
  const std::size_t b = bi.b;
  BigInt num = bpow(b, dy) * bpow(m, dz) + bpow(b, dz) * bpow(m, dy) - bpow(b, dy + dz);
  for (std::size_t i : bi.sizes) {
    num += (bpow(i + b, dy) - bpow(b, dy)) * (bpow(i + b, dz) - bpow(b, dz));
  }
  return num;
}

struct ExactPair {
  Rational lhs;
  Rational rhs;
};

ExactPair lemma2_exact(unsigned k, unsigned l, const BIVector& bi, std::size_t m) {
  return {fail_exact(k, l, bi, m), fail_exact(k - 1, l + 1, bi, m)};
}

ExactPair lemma3_exact(unsigned l, const BIVector& bi, std::size_t m) {
  return {fail_exact(l + 1, l, bi, m) + fail_exact(l, l - 1, bi, m),
          2 * fail_exact(l, l, bi, m)};
}

ExactPair convexity_exact(unsigned l, const BIVector& bi, std::size_t m) {
  const std::size_t b = bi.b;
  const BigInt blocked_term = bpow(b, l) * BigInt(m - b);
  BigInt sum = 0;
  for (std::size_t i : bi.sizes) {
    const BigInt t = bpow(i + b, l) * BigInt(m - i - b) - blocked_term;
    sum += t * t;
  }
  const BigInt denominator = bpow(m, 2 * l + 2);
  return {Rational(sum, denominator), Rational(blocked_term * blocked_term, denominator)};
}

InequalityReport report_from(const ExactPair& pair) {
  InequalityReport r;
  r.lhs = to_double(pair.lhs);
  r.rhs = to_double(pair.rhs);
  r.holds = pair.lhs > pair.rhs;
  return r;
}

InequalityReport report_from(double lhs, double rhs) {
  InequalityReport r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.holds = lhs > rhs;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

NormalizedBI NormalizedBI::from_counts(const BIVector& bi, std::size_t m) {
  if (m == 0 || bi.total() != m) {
    throw Error(Errc::PreconditionViolated, "b + sum(i_j) must equal m");
  }
  NormalizedBI out;
  out.beta = static_cast<double>(bi.b) / static_cast<double>(m);
  for (std::size_t i : bi.sizes) {
    if (i == 0) throw Error(Errc::PreconditionViolated, "class sizes must be positive");
    out.gammas.push_back(static_cast<double>(i) / static_cast<double>(m));
  }
  std::sort(out.gammas.begin(), out.gammas.end());
  Counts counts{bi, m};
  std::sort(counts.bi.sizes.begin(), counts.bi.sizes.end());
  out.counts = std::move(counts);
  return out;
}

NormalizedBI NormalizedBI::from_reals(double beta, std::vector<double> gammas) {
  if (!(beta >= 0.0 && beta < 1.0)) throw Error(Errc::InvalidValue, "beta must lie in [0, 1)");
  double total = beta;
  for (double g : gammas) {
    if (!(g > 0.0)) throw Error(Errc::InvalidValue, "gamma_j must be positive");
    total += g;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(Errc::InvalidValue, "beta + sum(gamma_j) must equal 1");
  }
  std::sort(gammas.begin(), gammas.end());
  NormalizedBI out;
  out.beta = beta;
  out.gammas = std::move(gammas);
  return out;
}

double fail_closed_form(unsigned d_y, unsigned d_z, const NormalizedBI& nbi) {
  require(d_y >= 1 && d_z >= 1, "degrees must be at least 1");
  if (nbi.r() == 1) return 1.0;
  const double beta = nbi.beta;
  const double by = ipow(beta, d_y);
  const double bz = ipow(beta, d_z);
  double value = by + bz - by * bz;
  for (double gamma : nbi.gammas) {
    const double s = gamma + beta;
    value += (ipow(s, d_y) - by) * (ipow(s, d_z) - bz);
  }
  return std::clamp(value, 0.0, 1.0);
}

Rational fail_exact(unsigned d_y, unsigned d_z, const BIVector& bi, std::size_t m) {
  require(d_y >= 1 && d_z >= 1, "degrees must be at least 1");
  require(m > 0 && bi.total() == m, "b + sum(i_j) must equal m");
  return Rational(fail_numerator(d_y, d_z, bi, m), bpow(m, d_y + d_z));
}

double fail_total(unsigned d_y, unsigned d_z, const BipartiteMultigraph& g_rest) {
  const auto partition = bi_partition(g_rest);
  return fail_closed_form(d_y, d_z, NormalizedBI::from_counts(partition.bi, g_rest.right_count()));
}

// ---------------------------------------------------------------------------
// Exact success probability.
//
// State after processing nodes 0..x-1: the family of right-node sets that
// can be exactly the matched set of some matching of those nodes, stored as
// a bitset over the 2^m subsets. The graph is matchable iff the final
// family is non-empty. Each node contributes a distribution over neighbor
// sets; with replacement a set A of size s arises from s! S(d, s) of the m^d
// tuples, without replacement each d-set has mass 1 / C(m, d).

namespace {

using Family = std::vector<std::uint64_t>;

struct NeighborSet {
  std::uint32_t mask;
  Rational weight;
};

BigInt surjections(unsigned d, unsigned s) {
  BigInt total = 0;
  BigInt binom = 1;
  for (unsigned j = 0; j <= s; ++j) {
    const BigInt term = binom * mp::pow(BigInt(s - j), d);
    total += (j % 2 == 0) ? term : BigInt(-term);
    binom = binom * (s - j) / (j + 1);
  }
  return total;
}

BigInt binomial(std::size_t n, std::size_t k) {
  BigInt r = 1;
  for (std::size_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

std::vector<NeighborSet> neighbor_set_distribution(const DegreeDistribution& rho, std::size_t m,
                                                   SamplingMode mode) {
  const std::uint32_t full = (std::uint32_t{1} << m) - 1;
  std::map<std::uint32_t, Rational> acc;
  for (const auto& [d, p] : rho.support()) {
    const Rational mass(p);
    if (mode == SamplingMode::WithReplacement) {
      const BigInt tuples = mp::pow(BigInt(m), d);
      std::vector<Rational> by_size(m + 1);
      for (unsigned s = 1; s <= std::min<std::size_t>(d, m); ++s) {
        by_size[s] = mass * Rational(surjections(d, s), tuples);
      }
      for (std::uint32_t mask = 1; mask <= full; ++mask) {
        const auto s = static_cast<unsigned>(std::popcount(mask));
        if (s <= d) acc[mask] += by_size[s];
      }
    } else {
      const Rational each = mass / Rational(binomial(m, d));
      for (std::uint32_t mask = 1; mask <= full; ++mask) {
        if (static_cast<unsigned>(std::popcount(mask)) == d) acc[mask] += each;
      }
    }
  }
  std::vector<NeighborSet> out;
  out.reserve(acc.size());
  for (auto& [mask, w] : acc) out.push_back({mask, std::move(w)});
  return out;
}

Family extend(const Family& family, std::uint32_t neighbors) {
  Family next(family.size(), 0);
  bool any = false;
  for (std::size_t w = 0; w < family.size(); ++w) {
    std::uint64_t bits = family[w];
    while (bits) {
      const auto matched = static_cast<std::uint32_t>(w * 64 + std::countr_zero(bits));
      bits &= bits - 1;
      std::uint32_t open = neighbors & ~matched;
      while (open) {
        const std::uint32_t grown = matched | (open & (0u - open));
        open &= open - 1;
        next[grown / 64] |= std::uint64_t{1} << (grown % 64);
        any = true;
      }
    }
  }
  if (!any) next.clear();
  return next;
}

std::uint64_t outcome_space(const DegreeSpec& spec, std::size_t m, SamplingMode mode) {
  const long double cap = static_cast<long double>(kOutcomeGuard) * 2;
  long double space = 1;
  for (const auto& rho : spec.nodes()) {
    long double node = 0;
    for (const auto& e : rho.support()) {
      long double tuples = 1;
      for (unsigned i = 0; i < e.degree && tuples <= cap; ++i) {
        tuples *= (mode == SamplingMode::WithReplacement) ? m : (m - i);
      }
      node += tuples;
    }
    space *= node;
    if (space > cap) return ~std::uint64_t{0};
  }
  return static_cast<std::uint64_t>(space);
}

}  // namespace

Rational success_probability_rational(const DegreeSpec& spec, std::size_t m, SamplingMode mode) {
  if (m == 0) throw Error(Errc::PreconditionViolated, "need m >= 1");
  if (mode == SamplingMode::WithoutReplacement) {
    for (const auto& rho : spec.nodes()) rho.check_against(m);
  }
  if (outcome_space(spec, m, mode) > kOutcomeGuard) {
    throw Error(Errc::InstanceTooLarge, "outcome space exceeds 1e8");
  }
  if (m > 16) throw Error(Errc::InstanceTooLarge, "exact evaluation supports m <= 16");
  if (spec.size() > m) return Rational(0);

  const std::size_t words = ((std::size_t{1} << m) + 63) / 64;
  std::map<Family, Rational> states;
  Family start(words, 0);
  start[0] = 1;  // the empty matched set
  states.emplace(std::move(start), Rational(1));

  for (const auto& rho : spec.nodes()) {
    const auto sets = neighbor_set_distribution(rho, m, mode);
    std::map<Family, Rational> next;
    for (const auto& [family, probability] : states) {
      for (const auto& [mask, weight] : sets) {
        auto grown = extend(family, mask);
        if (!grown.empty()) next[std::move(grown)] += probability * weight;
      }
    }
    states = std::move(next);
  }

  Rational total = 0;
  for (const auto& [family, probability] : states) total += probability;
  return total;
}

double success_probability_exact(const DegreeSpec& spec, std::size_t m, SamplingMode mode) {
  return to_double(success_probability_rational(spec, m, mode));
}

DegreeDistribution shift_toward_mean(const DegreeDistribution& rho, unsigned l, unsigned k,
                                     double eps) {
  require(l >= 1 && k >= l + 2, "need k - l >= 2");
  require(eps > 0.0 && eps <= rho.probability(l) && eps <= rho.probability(k),
          "need 0 < eps <= min(rho(l), rho(k))");
  std::map<unsigned, double> mass;
  for (const auto& e : rho.support()) mass[e.degree] = e.probability;
  mass[l] -= eps;
  mass[k] -= eps;
  mass[l + 1] += eps;
  mass[k - 1] += eps;
  std::vector<DegreeMass> entries;
  for (const auto& [d, p] : mass) entries.push_back({d, p});
  return make_distribution(entries);
}

DegreeSpec replace_node(const DegreeSpec& spec, std::size_t z, DegreeDistribution rho) {
  require(z < spec.size(), "node index out of range");
  std::vector<DegreeDistribution> nodes(spec.nodes().begin(), spec.nodes().end());
  nodes[z] = std::move(rho);
  return DegreeSpec(std::move(nodes));
}

// ---------------------------------------------------------------------------
// Inequality checks

InequalityReport lemma2_check(unsigned k, unsigned l, const NormalizedBI& nbi) {
  require(l >= 1 && k >= l + 2, "lemma 2 needs k - l >= 2");
  require(nbi.r() >= 2, "lemma 2 needs r >= 2");
  if (nbi.counts) return report_from(lemma2_exact(k, l, nbi.counts->bi, nbi.counts->m));
  return report_from(fail_closed_form(k, l, nbi), fail_closed_form(k - 1, l + 1, nbi));
}

InequalityReport lemma3_check(unsigned l, const NormalizedBI& nbi) {
  require(l >= 2, "lemma 3 needs l >= 2");
  require(nbi.r() >= 2, "lemma 3 needs r >= 2");
  InequalityReport report;
  if (nbi.counts) {
    const auto& [bi, m] = *nbi.counts;
    report = report_from(lemma3_exact(l, bi, m));
    const Rational k0 = fail_exact(l, l - 1, bi, m) + fail_exact(l + 1, l, bi, m) -
                        fail_exact(l, l, bi, m) - fail_exact(l + 1, l - 1, bi, m);
    const Rational k1 = fail_exact(l + 1, l - 1, bi, m) - fail_exact(l, l, bi, m);
    report.derived["K0"] = to_double(k0);
    report.derived["K1"] = to_double(k1);
    return report;
  }
  const double f_hi = fail_closed_form(l + 1, l, nbi);
  const double f_lo = fail_closed_form(l, l - 1, nbi);
  const double f_mid = fail_closed_form(l, l, nbi);
  const double f_wide = fail_closed_form(l + 1, l - 1, nbi);
  report = report_from(f_hi + f_lo, 2.0 * f_mid);
  report.derived["K0"] = f_lo + f_hi - f_mid - f_wide;
  report.derived["K1"] = f_wide - f_mid;
  return report;
}

InequalityReport convexity_K_check(unsigned l, const NormalizedBI& nbi) {
  require(l >= 2, "convexity check needs l >= 2");
  require(nbi.r() >= 2, "convexity check needs r >= 2");
  InequalityReport report;
  if (nbi.counts) {
    const auto& [bi, m] = *nbi.counts;
    const auto pair = convexity_exact(l, bi, m);
    report = report_from(pair);
    const Rational k = fail_exact(l, l, bi, m) + fail_exact(l + 1, l + 1, bi, m) -
                       2 * fail_exact(l, l + 1, bi, m);
    report.derived["K"] = to_double(k);
    return report;
  }
  const double beta = nbi.beta;
  const double blocked_term = ipow(beta, l) * (1.0 - beta);
  double lhs = 0.0;
  for (double gamma : nbi.gammas) {
    const double t = ipow(gamma + beta, l) * (1.0 - gamma - beta) - blocked_term;
    lhs += t * t;
  }
  report = report_from(lhs, blocked_term * blocked_term);
  report.derived["K"] = fail_closed_form(l, l, nbi) + fail_closed_form(l + 1, l + 1, nbi) -
                        2.0 * fail_closed_form(l, l + 1, nbi);
  return report;
}

InequalityReport appendixA_monotonicity(unsigned l, unsigned k, std::size_t b, std::size_t m) {
  require(b > 0 && b < m, "need 0 < b < m");
  require(l >= 1 && k >= l + 2, "need k - l >= 2");
  const Rational rest(BigInt(m - b), BigInt(m));
  return report_from(ExactPair{rest * Rational(bpow(b, l), bpow(m, l)),
                               rest * Rational(bpow(b, k - 1), bpow(m, k - 1))});
}

void PerturbationSpec::validate() const {
  auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!in_unit(p) || !in_unit(q) || !in_unit(p + epsilon) || !in_unit(q - epsilon)) {
    throw Error(Errc::InvalidValue, "perturbed masses must stay in [0, 1]");
  }
}

std::string_view to_string(PerturbationVerdict v) noexcept {
  switch (v) {
    case PerturbationVerdict::ImproveWithPositiveEps: return "ImproveWithPositiveEps";
    case PerturbationVerdict::ImproveWithNegativeEps: return "ImproveWithNegativeEps";
    case PerturbationVerdict::NoStrictImprovement: return "NoStrictImprovement";
  }
  return "Unknown";
}

double perturbation_change(const PerturbationSpec& spec, double k0, double k1) {
  const double eps = spec.epsilon;
  const double big_l = (spec.p - spec.q) * k0 + k1;
  return -eps * eps * k0 - eps * big_l;
}

PerturbationVerdict perturbation_sign(const PerturbationSpec& spec, double k0, double k1) {
  // For small eps the linear term -eps * L dominates; when L == 0 only the
  // quadratic term -eps^2 * K0 is left, which helps iff K0 > 0.
  const double big_l = (spec.p - spec.q) * k0 + k1;
  if (big_l > 0.0) return PerturbationVerdict::ImproveWithPositiveEps;
  if (big_l < 0.0) return PerturbationVerdict::ImproveWithNegativeEps;
  if (k0 > 0.0) return PerturbationVerdict::ImproveWithPositiveEps;
  return PerturbationVerdict::NoStrictImprovement;
}

// ---------------------------------------------------------------------------
// Grids

namespace {

void partitions(std::size_t remaining, std::size_t min_part, std::vector<std::size_t>& parts,
                std::size_t min_classes, BIVector& scratch,
                const std::function<void(const BIVector&)>& visit) {
  if (remaining == 0) {
    if (parts.size() >= min_classes) {
      scratch.sizes = parts;
      visit(scratch);
    }
    return;
  }
  for (std::size_t p = min_part; p <= remaining; ++p) {
    parts.push_back(p);
    partitions(remaining - p, p, parts, min_classes, scratch, visit);
    parts.pop_back();
  }
}

GridRow make_row(std::size_t m, const BIVector& bi, unsigned k, unsigned l, const ExactPair& pair) {
  GridRow row{m, bi, k, l, report_from(pair), pair.lhs == pair.rhs};
  return row;
}

void tally(GridSummary& s, const GridRow& row, const ExactPair& pair) {
  ++s.total;
  if (row.report.holds) {
    ++s.holds;
    return;
  }
  if (row.tie) ++s.ties;
  if (pair.lhs < pair.rhs) ++s.violated;
  if (row.bi.b > 0) ++s.failing_with_blocked;
}

}  // namespace

void for_each_bi_composition(std::size_t m, std::size_t min_classes,
                             const std::function<void(const BIVector&)>& visit) {
  std::vector<std::size_t> parts;
  BIVector scratch;
  for (std::size_t b = 0; b < m; ++b) {
    scratch.b = b;
    partitions(m - b, 1, parts, min_classes, scratch, visit);
  }
}

GridSummary sweep_lemma2(std::size_t max_m, const std::function<void(const GridRow&)>& on_row) {
  GridSummary summary;
  for (std::size_t m = 2; m <= max_m; ++m) {
    for_each_bi_composition(m, 2, [&](const BIVector& bi) {
      for (unsigned l = 1; l + 2 <= 6; ++l) {
        for (unsigned k = l + 2; k <= 6; ++k) {
          const auto pair = lemma2_exact(k, l, bi, m);
          const auto row = make_row(m, bi, k, l, pair);
          tally(summary, row, pair);
          if (on_row) on_row(row);
        }
      }
    });
  }
  return summary;
}

GridSummary sweep_lemma3(std::size_t max_m, const std::function<void(const GridRow&)>& on_row) {
  GridSummary summary;
  for (std::size_t m = 2; m <= max_m; ++m) {
    for_each_bi_composition(m, 2, [&](const BIVector& bi) {
      for (unsigned l = 2; l <= 5; ++l) {
        const auto pair = lemma3_exact(l, bi, m);
        const auto row = make_row(m, bi, l + 1, l, pair);
        tally(summary, row, pair);
        if (on_row) on_row(row);
      }
    });
  }
  return summary;
}

void write_grid_header(std::ostream& out) { out << "m,b,sizes,k,l,lhs,rhs,holds\n"; }

void write_grid_row(std::ostream& out, const GridRow& row) {
  out << row.m << ',' << row.bi.b << ',';
  for (std::size_t i = 0; i < row.bi.sizes.size(); ++i) out << (i ? ";" : "") << row.bi.sizes[i];
  const auto precision = out.precision(17);
  out << ',' << row.k << ',' << row.l << ',' << row.report.lhs << ',' << row.report.rhs << ','
      << (row.report.holds ? "true" : "false") << '\n';
  out.precision(precision);
}

}  // namespace lpm
