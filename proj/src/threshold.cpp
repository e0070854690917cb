#include "lpmatch/threshold.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

#include "lpmatch/error.hpp"
#include "lpmatch/montecarlo.hpp"
#include "lpmatch/rng.hpp"

namespace lpm {

namespace {

constexpr int kIterations = 200;
constexpr int kGrid = 4096;
constexpr int kFineSteps = 48;

struct Term {
  unsigned k;
  double weight;
};

std::array<Term, 2> terms(const ThresholdQuery& q) {
  return {Term{q.l, q.alpha}, Term{q.l + 1, 1.0 - q.alpha}};
}

// 1 - e^-x - x e^-x without cancellation near 0.
double core_vertex_fraction(double xi) {
  if (xi < 0.1) {
    double term = xi;
    double sum = 0.0;
    for (int j = 2; j <= 24; ++j) {
      term *= xi / j;
      sum += term;
    }
    return std::exp(-xi) * sum;
  }
  return -std::expm1(-xi) - xi * std::exp(-xi);
}

// 1 - rhs(xi) / xi, written with t / xi so that it stays accurate as xi -> 0.
double relative_gap(double c, const ThresholdQuery& q, double xi) {
  const double t = -std::expm1(-xi);
  const double ratio = t / xi;
  double s = 0.0;
  for (const auto& [k, w] : terms(q)) {
    if (w > 0.0) s += w * k * ratio * std::pow(t, static_cast<int>(k) - 2);
  }
  return 1.0 - c * s;
}

double rhs(double c, const ThresholdQuery& q, double xi) {
  const double t = -std::expm1(-xi);
  double s = 0.0;
  for (const auto& [k, w] : terms(q)) {
    if (w > 0.0) s += w * k * std::pow(t, static_cast<int>(k) - 1);
  }
  return c * s;
}

// Bisects a sign change of `gap` between lo (gap < 0) and hi (gap >= 0).
template <class F>
double bisect_root(F gap, double lo, double hi) {
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (gap(mid) < 0.0 ? lo : hi) = mid;
  }
  return hi;
}

// Largest root below `upper`, where gap(upper) >= 0: scan downward on a
// uniform grid, then geometrically towards 0, and bisect the first sign change.
template <class F>
double largest_root_below(F gap, double upper) {
  if (!(upper > 0.0)) return 0.0;
  double previous = upper;
  if (gap(upper) == 0.0) return upper;
  auto probe = [&](double xi) -> std::optional<double> {
    const double g = gap(xi);
    if (g == 0.0) return xi;
    if (g < 0.0) return bisect_root(gap, xi, previous);
    previous = xi;
    return std::nullopt;
  };
  for (int i = kGrid - 1; i >= 1; --i) {
    if (auto root = probe(upper * i / kGrid)) return *root;
  }
  double xi = upper / kGrid;
  for (int j = 0; j < kFineSteps; ++j) {
    xi *= 0.5;
    if (auto root = probe(xi)) return *root;
  }
  return 0.0;
}

}  // namespace

ThresholdQuery ThresholdQuery::from_dbar(double dbar) {
  if (!(dbar > 2.0) || !std::isfinite(dbar)) {
    throw Error(Errc::PreconditionViolated, "threshold needs dbar > 2");
  }
  const double lo = std::floor(dbar);
  if (lo == dbar) return {static_cast<unsigned>(lo), 1.0};
  return {static_cast<unsigned>(lo), std::ceil(dbar) - dbar};
}

double xi_fixed_point(double c, const ThresholdQuery& q) {
  if (!(c > 0.0)) throw Error(Errc::PreconditionViolated, "need c > 0");
  if (q.l < 2 || !(q.alpha >= 0.0 && q.alpha <= 1.0)) {
    throw Error(Errc::PreconditionViolated, "need l >= 2 and alpha in [0, 1]");
  }
  // The right side is increasing and bounded by c E[K], so iterating from
  // there decreases monotonically towards the largest root. Near a tangency
  // the iteration crawls; the bracketed scan below finishes the job.
  double xi = c * (q.alpha * q.l + (1.0 - q.alpha) * (q.l + 1));
  for (int i = 0; i < kIterations; ++i) {
    const double next = rhs(c, q, xi);
    if (!(next < xi)) break;
    xi = next;
  }
  return largest_root_below([&](double x) { return relative_gap(c, q, x); }, xi);
}

CoreState core_density(double c, const ThresholdQuery& q) {
  CoreState state;
  state.xi = xi_fixed_point(c, q);
  if (state.xi <= 0.0) return state;
  const double t = -std::expm1(-state.xi);
  double edges = 0.0;
  for (const auto& [k, w] : terms(q)) {
    if (w > 0.0) edges += w * std::pow(t, static_cast<int>(k));
  }
  state.density = c * edges / core_vertex_fraction(state.xi);
  return state;
}

double threshold_c_star(const ThresholdQuery& q) {
  auto below = [&](double c) {
    const auto state = core_density(c, q);
    return state.core_empty() || *state.density <= 1.0;
  };
  double lo = 0.01;
  double hi = 1.0;
  if (below(hi)) return hi;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    (below(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double threshold_c_star(double dbar) { return threshold_c_star(ThresholdQuery::from_dbar(dbar)); }

CoreState uniform_core_density(double c, unsigned k) {
  if (!(c > 0.0) || k < 2) throw Error(Errc::PreconditionViolated, "need c > 0 and k >= 2");
  const double ck = c * k;
  auto h = [&](double xi) { return xi - ck * std::pow(1.0 - std::exp(-xi), k - 1.0); };
  double upper = ck;
  for (int i = 0; i < kIterations; ++i) {
    const double next = ck * std::pow(1.0 - std::exp(-upper), k - 1.0);
    if (!(next < upper)) break;
    upper = next;
  }
  // Scan h / xi so that the k = 2 case keeps its sign near 0.
  const double xi = largest_root_below([&](double x) { return h(x) / x; }, upper);

  CoreState state;
  state.xi = xi;
  if (xi <= 0.0) return state;
  const double t = 1.0 - std::exp(-xi);
  const double vertices = xi < 0.1 ? core_vertex_fraction(xi) : t - xi * std::exp(-xi);
  state.density = c * std::pow(t, static_cast<double>(k)) / vertices;
  return state;
}

Interval empirical_threshold(double dbar, std::size_t m, std::size_t trials, std::uint64_t seed,
                             double resolution, unsigned threads) {
  if (!(resolution > 0.0)) throw Error(Errc::PreconditionViolated, "need resolution > 0");
  if (m == 0 || trials == 0) throw Error(Errc::PreconditionViolated, "need m, trials >= 1");
  Interval bracket{0.25, 1.0};
  for (std::uint64_t probe = 0; bracket.width() > resolution; ++probe) {
    const double c = 0.5 * (bracket.lo + bracket.hi);
    const auto n = static_cast<std::size_t>(std::max<long>(1, std::lround(c * m)));
    const auto record = failure_rate(fixed_split_spec(n, dbar), m, trials, mix_seed(seed, probe),
                                     SamplingMode::WithReplacement, threads);
    (record.rate >= 0.5 ? bracket.hi : bracket.lo) = c;
  }
  return bracket;
}

void write_threshold_csv(std::ostream& out, std::span<const double> dbars) {
  out << "dbar,c_star\n";
  const auto precision = out.precision(10);
  for (double d : dbars) out << d << ',' << threshold_c_star(d) << '\n';
  out.precision(precision);
}

}  // namespace lpm
