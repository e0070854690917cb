#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>

namespace lpm {

/// Mixed edge sizes: a fraction alpha of the left nodes has degree l, the
/// rest degree l + 1.
struct ThresholdQuery {
  unsigned l = 3;
  double alpha = 1.0;

  double dbar() const noexcept { return alpha * l + (1.0 - alpha) * (l + 1); }

  /// l = floor(dbar), alpha = ceil(dbar) - dbar; integral dbar maps to
  /// (dbar, 1). Requires dbar > 2.
  static ThresholdQuery from_dbar(double dbar);
};

struct CoreState {
  double xi = 0.0;
  /// Core edges per core vertex; empty when the 2-core is empty (xi == 0).
  std::optional<double> density;

  bool core_empty() const noexcept { return !density.has_value(); }
};

/// Largest non-negative root of xi = c * E_K[K (1 - e^-xi)^(K-1)].
double xi_fixed_point(double c, const ThresholdQuery& q);

/// density = c * E_K[(1 - e^-xi)^K] / (1 - e^-xi - xi e^-xi) at the largest
/// root, or an empty core.
CoreState core_density(double c, const ThresholdQuery& q);

/// sup{c : core empty or density <= 1}, bisected over [0.01, 1] to width 1e-9.
double threshold_c_star(double dbar);
double threshold_c_star(const ThresholdQuery& q);

/// k-uniform evaluation coded on its own; used to cross-check the alpha == 1
/// branch of the mixed formulas.
CoreState uniform_core_density(double c, unsigned k);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
  double width() const noexcept { return hi - lo; }
};

/// Monte Carlo bisection over c in [0.25, 1] for the point where the failure
/// rate of the fixed split at m right nodes crosses 1/2. Each probe runs
/// `trials` graphs; stops once the bracket is no wider than `resolution`.
Interval empirical_threshold(double dbar, std::size_t m, std::size_t trials, std::uint64_t seed,
                             double resolution, unsigned threads = 0);

/// CSV `dbar,c_star`, one row per requested dbar.
void write_threshold_csv(std::ostream& out, std::span<const double> dbars);

}  // namespace lpm
