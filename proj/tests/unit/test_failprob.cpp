#include <doctest.h>

#include <sstream>

#include "lpmatch/error.hpp"
#include "lpmatch/failprob.hpp"
#include "oracles.hpp"

using namespace lpm;

namespace {

NormalizedBI nbi(double beta, std::vector<double> gammas) {
  return NormalizedBI::from_reals(beta, std::move(gammas));
}

BipartiteMultigraph graph(std::size_t m, const std::vector<std::vector<Node>>& rows) {
  return BipartiteMultigraph(m, rows);
}

DegreeSpec points(std::initializer_list<unsigned> degrees) {
  std::vector<DegreeDistribution> nodes;
  for (auto d : degrees) nodes.push_back(DegreeDistribution::point_mass(d));
  return DegreeSpec(nodes);
}

}  // namespace

TEST_CASE("fail closed form") {
  CHECK(fail_closed_form(2, 5, nbi(0.3, {0.7})) == 1.0);
  CHECK(fail_closed_form(1, 1, nbi(0.0, {0.5, 0.5})) == doctest::Approx(0.5));

  // beta = 1/4, gamma = [1/4, 1/2] at m = 4 against brute force.
  CHECK(fail_closed_form(2, 3, nbi(0.25, {0.25, 0.5})) ==
        doctest::Approx(fail_exact(2, 3, {1, {1, 2}}, 4).convert_to<double>()));

  CHECK_THROWS_AS(nbi(1.0, {}), Error);
  CHECK_THROWS_AS(nbi(0.2, {0.3}), Error);
  CHECK_THROWS_AS(nbi(0.5, {0.5, 0.0}), Error);
}

TEST_CASE("fail_total against brute force") {
  SUBCASE("forced residual") {
    const auto g = graph(3, {{0}, {1}});
    CHECK(fail_total(1, 1, g) == 1.0);
    CHECK(oracle::fail(1, 1, g) == 1);
  }
  SUBCASE("two classes of sizes 1 and 2") {
    // Right 0 and 1 share a left node, so they form a class; 2 is free.
    const auto g = graph(3, {{0, 1}});
    REQUIRE(bi_partition(g).bi == BIVector{0, {1, 2}});
    CHECK(fail_total(1, 1, g) == doctest::Approx(oracle::fail(1, 1, g).convert_to<double>()));
  }
  SUBCASE("empty residual") {
    const BipartiteMultigraph g(3);
    for (unsigned dy = 1; dy <= 3; ++dy) {
      for (unsigned dz = 1; dz <= 3; ++dz) {
        CHECK(fail_exact(dy, dz, bi_partition(g).bi, 3) == oracle::fail(dy, dz, g));
      }
    }
  }
  SUBCASE("unmatchable residual") {
    CHECK_THROWS_AS(fail_total(1, 1, graph(1, {{0}, {0}})), Error);
  }
}

TEST_CASE("exact success probability") {
  CHECK(success_probability_rational(points({1, 1}), 2, SamplingMode::WithReplacement) ==
        Rational(1, 2));

  // Both nodes degree 2 on m = 2: only the two "same singleton" outcomes
  // (probability 1/16 each) fail.
  const auto p22 = success_probability_rational(points({2, 2}), 2, SamplingMode::WithReplacement);
  CHECK(p22 == oracle::success_probability(points({2, 2}), 2, SamplingMode::WithReplacement));
  CHECK(p22 == Rational(7, 8));

  // Mean-preserving shift: {1: 1/2, 3: 1/2} -> point mass 2 on n = 3, m = 3.
  const auto gap = make_distribution({{1, 0.5}, {3, 0.5}});
  const DegreeSpec before({gap, DegreeDistribution::point_mass(2), DegreeDistribution::point_mass(2)});
  const auto after = replace_node(before, 0, shift_toward_mean(gap, 1, 3, 0.5));
  CHECK(after[0] == DegreeDistribution::point_mass(2));
  const auto p_before = success_probability_rational(before, 3, SamplingMode::WithReplacement);
  const auto p_after = success_probability_rational(after, 3, SamplingMode::WithReplacement);
  CHECK(p_after > p_before);
  CHECK(p_before == oracle::success_probability(before, 3, SamplingMode::WithReplacement));

  SUBCASE("without replacement") {
    const DegreeSpec spec({make_distribution({{1, 0.25}, {2, 0.75}}), DegreeDistribution::point_mass(2),
                           DegreeDistribution::point_mass(1)});
    CHECK(success_probability_rational(spec, 3, SamplingMode::WithoutReplacement) ==
          oracle::success_probability(spec, 3, SamplingMode::WithoutReplacement));
  }
  SUBCASE("more left than right nodes") {
    CHECK(success_probability_exact(points({3, 3, 3}), 2, SamplingMode::WithReplacement) == 0.0);
  }
  SUBCASE("guard") {
    CHECK_THROWS_AS(success_probability_exact(points({6, 6, 6}), 8, SamplingMode::WithReplacement),
                    Error);
  }
}

TEST_CASE("lemma checks") {
  CHECK(lemma2_check(4, 2, nbi(0.5, {0.25, 0.25})).holds);
  const auto tie = lemma2_check(3, 1, nbi(0.0, {0.5, 0.5}));
  CHECK(tie.lhs == doctest::Approx(tie.rhs));
  CHECK_THROWS_AS(lemma2_check(4, 2, nbi(0.5, {0.5})), Error);
  CHECK_THROWS_AS(lemma2_check(3, 2, nbi(0.5, {0.25, 0.25})), Error);

  CHECK(lemma3_check(2, nbi(0.5, {0.25, 0.25})).holds);
  CHECK(lemma3_check(3, nbi(0.0, {0.1, 0.9})).holds);
  CHECK_THROWS_AS(lemma3_check(1, nbi(0.5, {0.25, 0.25})), Error);
  const auto r = lemma3_check(2, NormalizedBI::from_counts({2, {1, 1}}, 4));
  CHECK(r.derived.count("K0") == 1);
  CHECK(r.derived.count("K1") == 1);
}

TEST_CASE("exact and floating paths agree") {
  for (std::size_t m = 2; m <= 7; ++m) {
    for_each_bi_composition(m, 2, [&](const BIVector& bi) {
      const auto exact = NormalizedBI::from_counts(bi, m);
      auto reals = exact;
      reals.counts.reset();
      const auto a = lemma3_check(2, exact);
      const auto b = lemma3_check(2, reals);
      CHECK(a.lhs == doctest::Approx(b.lhs).epsilon(1e-12));
      CHECK(a.rhs == doctest::Approx(b.rhs).epsilon(1e-12));
      CHECK(a.derived.at("K0") == doctest::Approx(b.derived.at("K0")).epsilon(1e-9));
    });
  }
}

TEST_CASE("convexity events") {
  CHECK(convexity_K_check(2, nbi(0.0, {0.5, 0.5})).holds);
  CHECK_FALSE(convexity_K_check(2, nbi(0.5, {0.25, 0.25})).holds);
  CHECK_FALSE(convexity_K_check(3, nbi(2.0 / 3.0, {1.0 / 6.0, 1.0 / 6.0})).holds);
  for (double beta : {0.0, 0.1, 0.4}) {
    const double rest = 1.0 - beta;
    const auto r = convexity_K_check(3, nbi(beta, {rest * 0.3, rest * 0.7}));
    CHECK(r.derived.at("K") == doctest::Approx(r.lhs - r.rhs).epsilon(1e-12));
  }
  CHECK_THROWS_AS(convexity_K_check(1, nbi(0.0, {0.5, 0.5})), Error);
}

TEST_CASE("appendix monotonicity") {
  const auto r = appendixA_monotonicity(2, 4, 1, 2);
  CHECK(r.holds);
  CHECK(r.lhs == doctest::Approx(0.125));
  CHECK(r.rhs == doctest::Approx(0.0625));
  CHECK(appendixA_monotonicity(2, 5, 9, 10).holds);
  CHECK_THROWS_AS(appendixA_monotonicity(2, 4, 0, 10), Error);
}

TEST_CASE("perturbation sign") {
  const PerturbationSpec any{0.3, 0.6, 0.01};
  CHECK(perturbation_sign(any, 0.0, 0.1) == PerturbationVerdict::ImproveWithPositiveEps);
  CHECK(perturbation_sign({0.4, 0.4, 0.01}, -0.05, 0.1) == PerturbationVerdict::ImproveWithPositiveEps);
  CHECK(perturbation_sign({0.4, 0.4, 0.01}, 0.0, 0.0) == PerturbationVerdict::NoStrictImprovement);
  CHECK(perturbation_sign({0.4, 0.4, 0.01}, -0.1, 0.0) == PerturbationVerdict::NoStrictImprovement);
  CHECK(perturbation_sign({0.4, 0.4, 0.01}, 0.1, 0.0) == PerturbationVerdict::ImproveWithPositiveEps);
  CHECK(perturbation_sign({0.4, 0.4, 0.01}, 0.0, -0.2) == PerturbationVerdict::ImproveWithNegativeEps);

  // K0 = 0.05, K1 = 0.1, p = 0.9, q = 0.1: L = 0.14 > 0. Substituting
  // eps = +-0.005 into the quadratic shows only the positive sign helps.
  const PerturbationSpec s{0.9, 0.1, 0.005};
  CHECK(perturbation_sign(s, 0.05, 0.1) == PerturbationVerdict::ImproveWithPositiveEps);
  CHECK(perturbation_change(s, 0.05, 0.1) < 0.0);
  CHECK(perturbation_change({0.9, 0.1, -0.005}, 0.05, 0.1) > 0.0);

  CHECK_NOTHROW(s.validate());
  CHECK_THROWS_AS((PerturbationSpec{0.9, 0.1, 0.2}).validate(), Error);
}

TEST_CASE("grid sweeps") {
  std::size_t compositions = 0;
  for_each_bi_composition(4, 2, [&](const BIVector& bi) {
    CHECK(bi.total() == 4);
    CHECK(bi.r() >= 2);
    ++compositions;
  });
  // b=0: 3+1, 2+2, 2+1+1, 1+1+1+1; b=1: 2+1, 1+1+1; b=2: 1+1.
  CHECK(compositions == 7);

  const auto l3 = sweep_lemma3(8);
  CHECK(l3.all_hold());

  const auto l2 = sweep_lemma2(8);
  CHECK(l2.violated == 0);
  CHECK(l2.failing_with_blocked == 0);
  CHECK(l2.ties == l2.total - l2.holds);

  std::ostringstream csv;
  write_grid_header(csv);
  sweep_lemma2(3, [&](const GridRow& row) { write_grid_row(csv, row); });
  CHECK(csv.str().rfind("m,b,sizes,k,l,lhs,rhs,holds\n2,0,1;1,3,1,0.125,0.125,false\n", 0) == 0);
}
