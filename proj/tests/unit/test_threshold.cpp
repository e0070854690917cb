#include <doctest.h>

#include <cmath>
#include <sstream>

#include "lpmatch/error.hpp"
#include "lpmatch/threshold.hpp"
#include "oracles.hpp"

using namespace lpm;

TEST_CASE("query from dbar") {
  const auto q = ThresholdQuery::from_dbar(3.5);
  CHECK(q.l == 3);
  CHECK(q.alpha == doctest::Approx(0.5));
  CHECK(q.dbar() == doctest::Approx(3.5));
  CHECK(ThresholdQuery::from_dbar(3.0).l == 3);
  CHECK(ThresholdQuery::from_dbar(3.0).alpha == 1.0);
  CHECK_THROWS_AS(ThresholdQuery::from_dbar(2.0), Error);
  CHECK_THROWS_AS(ThresholdQuery::from_dbar(std::nan("")), Error);
}

TEST_CASE("fixed point examples") {
  CHECK(xi_fixed_point(0.918, ThresholdQuery{3, 1.0}) == doctest::Approx(2.149).epsilon(0.003));
  CHECK(xi_fixed_point(0.957, ThresholdQuery{3, 0.5}) == doctest::Approx(2.895).epsilon(0.003));
  CHECK(xi_fixed_point(1e-4, ThresholdQuery{3, 1.0}) == 0.0);

  // Residue of the fixed point equation.
  for (double c = 0.05; c <= 2.0; c += 0.05) {
    for (const ThresholdQuery q : {ThresholdQuery{3, 1.0}, ThresholdQuery{3, 0.5}, ThresholdQuery{2, 0.2}}) {
      const double xi = xi_fixed_point(c, q);
      if (xi == 0.0) continue;
      const double t = -std::expm1(-xi);
      const double mean = q.alpha * q.l * std::pow(t, q.l - 1) +
                          (1.0 - q.alpha) * (q.l + 1) * std::pow(t, q.l);
      CHECK(std::abs(xi - c * mean) <= 1e-10 * std::max(1.0, xi));
    }
  }
}

TEST_CASE("core density") {
  const auto at = core_density(0.957, ThresholdQuery{3, 0.5});
  REQUIRE_FALSE(at.core_empty());
  CHECK(*at.density == doctest::Approx(1.0).epsilon(0.005));
  CHECK(*core_density(0.99, ThresholdQuery{3, 0.5}).density > 1.0);
  const auto low = core_density(0.5, ThresholdQuery{3, 1.0});
  CHECK((low.core_empty() || *low.density < 1.0));
}

TEST_CASE("threshold values") {
  CHECK(threshold_c_star(3.5) == doctest::Approx(0.957).epsilon(0.002));
  CHECK(threshold_c_star(3.0) == doctest::Approx(0.91794).epsilon(0.0005));
  for (unsigned k : {3u, 4u, 5u}) {
    CHECK(threshold_c_star(ThresholdQuery{k, 1.0}) ==
          doctest::Approx(static_cast<double>(oracle::uniform_threshold(k))).epsilon(1e-6));
  }
  // alpha = 1 and the uniform solver agree along the fixed-point curve.
  for (double c : {0.7, 0.85, 0.95, 1.2}) {
    CHECK(std::abs(xi_fixed_point(c, ThresholdQuery{3, 1.0}) - uniform_core_density(c, 3).xi) <= 1e-12);
  }
}

TEST_CASE("threshold continuity and monotonicity") {
  double prev = threshold_c_star(2.1);
  for (double d = 2.2; d <= 5.0 + 1e-9; d += 0.1) {
    const double c = threshold_c_star(d);
    CHECK(c > prev);
    CHECK(c - prev < 0.1);
    prev = c;
  }
  CHECK(threshold_c_star(2.5) == doctest::Approx(threshold_c_star(ThresholdQuery{2, 0.5})));
}

TEST_CASE("csv") {
  std::ostringstream out;
  const double dbars[] = {3.5};
  write_threshold_csv(out, dbars);
  CHECK(out.str().rfind("dbar,c_star\n3.5,0.957", 0) == 0);
}

TEST_CASE("empirical bracket") {
  const auto iv = empirical_threshold(3.5, 2000, 60, 7, 0.01, 0);
  CHECK(iv.width() <= 0.01 + 1e-12);
  CHECK(std::abs(0.5 * (iv.lo + iv.hi) - 0.957) < 0.03);
  CHECK_THROWS_AS(empirical_threshold(3.5, 100, 10, 1, 0.0), Error);

  // A coarse resolution returns the starting bracket without probing.
  const auto coarse = empirical_threshold(3.5, 100, 10, 1, 0.9);
  CHECK(coarse.lo == 0.25);
  CHECK(coarse.hi == 1.0);
}
