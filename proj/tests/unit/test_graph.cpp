#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "lpmatch/error.hpp"
#include "lpmatch/graph.hpp"
#include "lpmatch/rng.hpp"

using namespace lpm;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an lpm::Error");
  return Errc::InvalidValue;
}

std::vector<unsigned> degrees(const BipartiteMultigraph& g) {
  std::vector<unsigned> out;
  for (std::size_t x = 0; x < g.left_count(); ++x) out.push_back(static_cast<unsigned>(g.degree(x)));
  return out;
}

}  // namespace

TEST_CASE("make_distribution builds and validates pmfs") {
  const auto point = make_distribution({{3, 1.0}});
  CHECK(point.is_point_mass());
  CHECK(point.mean() == 3.0);

  const auto two = make_distribution({{4, 0.5}, {3, 0.5}});
  CHECK(two.support().size() == 2);
  CHECK(two.support()[0].degree == 3);
  CHECK(two.mean() == doctest::Approx(3.5));

  CHECK(code_of([] { make_distribution({{3, 0.5}, {3, 0.5}}); }) == Errc::DuplicateDegree);
  CHECK(code_of([] { make_distribution({{0, 1.0}}); }) == Errc::DegreeZero);
  CHECK(code_of([] { make_distribution({{2, -0.1}, {3, 1.1}}); }) == Errc::NegativeProbability);
  CHECK(code_of([] { make_distribution({{2, 0.5}, {3, 0.4}}); }) == Errc::SumNotOne);
  CHECK(code_of([] { make_distribution(std::span<const DegreeMass>{}); }) == Errc::SumNotOne);
}

TEST_CASE("small deviations from one are renormalized, zero masses dropped") {
  const auto d = make_distribution({{2, 0.5 + 4e-10}, {3, 0.5}, {7, 0.0}});
  CHECK(d.support().size() == 2);
  CHECK(d.probability(2) + d.probability(3) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d.probability(7) == 0.0);
}

TEST_CASE("check_against rejects degrees above m") {
  const auto d = make_distribution({{2, 0.5}, {5, 0.5}});
  CHECK_NOTHROW(d.check_against(5));
  CHECK(code_of([&] { d.check_against(4); }) == Errc::DegreeExceedsM);
}

TEST_CASE("near_optimal_spec modes") {
  SUBCASE("fixed split") {
    const auto spec = near_optimal_spec(4, 3.5, SpecMode::Fixed);
    std::vector<unsigned> ds;
    for (const auto& rho : spec.nodes()) {
      CHECK(rho.is_point_mass());
      ds.push_back(rho.min_degree());
    }
    CHECK(ds == std::vector<unsigned>{3, 3, 4, 4});
    CHECK(average_mean(spec) == doctest::Approx(3.5));
  }
  SUBCASE("integral dbar is a point mass in every mode") {
    const auto spec = near_optimal_spec(3, 2.0, SpecMode::Binomial);
    for (const auto& rho : spec.nodes()) CHECK(rho == DegreeDistribution::point_mass(2));
    CHECK(spec.average_mean() == 2.0);
  }
  SUBCASE("binomial") {
    const auto spec = near_optimal_spec(5, 3.25, SpecMode::Binomial);
    for (const auto& rho : spec.nodes()) {
      CHECK(rho.probability(3) == doctest::Approx(0.75));
      CHECK(rho.probability(4) == doctest::Approx(0.25));
    }
  }
  SUBCASE("custom") {
    const std::vector<double> p{0.2, 0.8};
    const auto spec = near_optimal_spec(2, 3.5, SpecMode::Custom, p);
    CHECK(spec[0].probability(3) == doctest::Approx(0.2));
    CHECK(spec[0].probability(4) == doctest::Approx(0.8));
    CHECK(spec[1].probability(3) == doctest::Approx(0.8));
    CHECK(spec.average_mean() == doctest::Approx(3.5));
  }
  SUBCASE("errors") {
    CHECK(code_of([] { near_optimal_spec(3, 3.5, SpecMode::Fixed); }) == Errc::NonIntegralSplit);
    const std::vector<double> p{0.2, 0.2};
    CHECK(code_of([&] { near_optimal_spec(2, 3.5, SpecMode::Custom, p); }) == Errc::MeanMismatch);
    CHECK(code_of([] { near_optimal_spec(1, 3.0, SpecMode::Fixed); }) == Errc::PreconditionViolated);
  }
  SUBCASE("supports stay on floor and ceil") {
    for (double dbar : {2.0, 2.5, 3.3, 4.75}) {
      const auto spec = near_optimal_spec(8, dbar, SpecMode::Binomial);
      for (const auto& rho : spec.nodes()) {
        for (const auto& e : rho.support()) {
          CHECK((e.degree == static_cast<unsigned>(std::floor(dbar)) ||
                 e.degree == static_cast<unsigned>(std::ceil(dbar))));
        }
      }
    }
  }
}

TEST_CASE("sample_graph") {
  SUBCASE("forced outcome") {
    const DegreeSpec spec({DegreeDistribution::point_mass(1), DegreeDistribution::point_mass(1)});
    const auto g = sample_graph(spec, 1, 99, SamplingMode::WithReplacement);
    CHECK(g.left_count() == 2);
    CHECK(g.neighbors(0)[0] == 0);
    CHECK(g.neighbors(1)[0] == 0);
  }
  SUBCASE("fixed spec keeps its degree sequence") {
    const auto g = sample_graph(near_optimal_spec(4, 3.5, SpecMode::Fixed), 8, 42,
                                SamplingMode::WithReplacement);
    CHECK(degrees(g) == std::vector<unsigned>{3, 3, 4, 4});
  }
  SUBCASE("binomial degree counts") {
    const auto g = sample_graph(near_optimal_spec(1000, 3.5, SpecMode::Binomial), 1000, 7,
                                SamplingMode::WithReplacement);
    std::size_t threes = 0;
    for (auto d : degrees(g)) threes += d == 3;
    CHECK(threes >= 400);
    CHECK(threes <= 600);
  }
  SUBCASE("determinism") {
    const auto spec = near_optimal_spec(50, 3.5, SpecMode::Binomial);
    for (auto mode : {SamplingMode::WithReplacement, SamplingMode::WithoutReplacement}) {
      CHECK(sample_graph(spec, 60, 5, mode) == sample_graph(spec, 60, 5, mode));
      CHECK_FALSE(sample_graph(spec, 60, 5, mode) == sample_graph(spec, 60, 6, mode));
    }
  }
  SUBCASE("without replacement gives distinct neighbors") {
    const DegreeSpec spec(std::vector<DegreeDistribution>(20, make_distribution({{2, 0.5}, {5, 0.5}})));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto g = sample_graph(spec, 6, seed, SamplingMode::WithoutReplacement);
      for (std::size_t x = 0; x < g.left_count(); ++x) CHECK(g.support(x).size() == g.degree(x));
    }
    CHECK(code_of([&] { sample_graph(spec, 4, 1, SamplingMode::WithoutReplacement); }) ==
          Errc::DegreeExceedsM);
  }
  SUBCASE("empirical degree frequencies") {
    const auto rho = make_distribution({{1, 0.2}, {2, 0.5}, {4, 0.3}});
    const std::size_t n = 100000;
    const auto g = sample_graph(DegreeSpec(std::vector<DegreeDistribution>(n, rho)), 10, 11,
                                SamplingMode::WithReplacement);
    std::map<unsigned, double> freq;
    for (auto d : degrees(g)) freq[d] += 1;
    for (const auto& e : rho.support()) {
      const double sd = std::sqrt(n * e.probability * (1 - e.probability));
      CHECK(std::abs(freq[e.degree] - n * e.probability) <= 3 * sd);
    }
  }
}

TEST_CASE("graph text round trip") {
  BipartiteMultigraph g(4);
  g.add_left_node({0, 0, 3});
  g.add_left_node({2});
  std::stringstream io;
  write_graph(io, g);
  CHECK(io.str() == "2 4\n0 0 3\n2\n");
  CHECK(read_graph(io) == g);

  std::istringstream bad("2 3\n0 1\n5\n");
  CHECK(code_of([&] { read_graph(bad); }) == Errc::ParseError);
  CHECK(code_of([&] { g.add_left_node({4}); }) == Errc::InvalidGraph);
  CHECK(code_of([&] { g.add_left_node(std::span<const Node>{}); }) == Errc::InvalidGraph);
}

TEST_CASE("rng is stable and bounded") {
  Xoshiro256 a(123);
  Xoshiro256 b(123);
  for (int i = 0; i < 100; ++i) CHECK(a() == b());
  Xoshiro256 r(5);
  for (int i = 0; i < 1000; ++i) {
    CHECK(r.below(7) < 7);
    const double u = r.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(mix_seed(1, 2) != mix_seed(2, 1));
  static_assert(splitmix64(0) == 0xE220A8397B1DCDAFULL);
}
