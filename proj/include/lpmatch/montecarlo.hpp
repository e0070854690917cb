#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lpmatch/graph.hpp"

namespace lpm {

enum class DegreeMode { Fixed, Binomial };

struct AlphaGrid {
  std::vector<double> alphas;
  double c = 0.0;
};

struct CGrid {
  std::vector<double> cs;
};

struct ExperimentConfig {
  std::size_t m = 0;
  double dbar = 0.0;
  DegreeMode mode = DegreeMode::Fixed;
  std::variant<AlphaGrid, CGrid> sweep = CGrid{};
  std::size_t trials = 0;
  std::uint64_t base_seed = 0;
  SamplingMode sampling = SamplingMode::WithReplacement;

  /// Throws InvalidValue unless trials >= 1, alphas lie in [0,1], every c is
  /// in (0,1] and round(c*m) >= 2.
  void validate() const;
};

struct ExperimentRecord {
  double param = 0.0;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double rate = 0.0;
  /// Wilson score interval at 95%.
  double ci_low = 0.0;
  double ci_high = 0.0;
  double realized_dbar = 0.0;
};

/// Round half to even, for the fixed-mode split count.
std::size_t round_half_even(double x);

/// Wilson 95% interval for `failures` out of `trials`, clamped so that it
/// contains the observed rate.
std::pair<double, double> wilson_interval(std::size_t failures, std::size_t trials);

/// Fixed split: round_half_even(alpha*n) nodes at l, the rest at l + 1, with
/// (l, alpha) = ThresholdQuery::from_dbar(dbar).
DegreeSpec fixed_split_spec(std::size_t n, double dbar);
/// Every node draws l with probability alpha, else l + 1.
DegreeSpec binomial_split_spec(std::size_t n, double dbar);

/// Trial t samples sample_graph(spec, m, mix_seed(base_seed, t), sampling).
/// Trials are split into contiguous blocks over `threads` workers (0 = one
/// per hardware thread); the count is the same for any worker count.
ExperimentRecord failure_rate(const DegreeSpec& spec, std::size_t m, std::size_t trials,
                              std::uint64_t base_seed, SamplingMode sampling,
                              unsigned threads = 1);

/// One record per c; n = round(c*m). Grid point g uses stream 0.
std::vector<ExperimentRecord> sweep_c(const ExperimentConfig& cfg, unsigned threads = 1);

/// One record per alpha at the grid's c: round_half_even(alpha*n) nodes at
/// floor(dbar) in Fixed mode, or per-node coin flips in Binomial mode.
std::vector<ExperimentRecord> sweep_alpha(const ExperimentConfig& cfg, unsigned threads = 1);

struct Comparison {
  double c = 0.0;
  ExperimentRecord fixed;
  ExperimentRecord binomial;
  /// rate_fixed - rate_binomial with a Wald 95% interval.
  double diff = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// Fixed uses stream 0 and binomial stream 1, so the two never share seeds.
std::vector<Comparison> compare_fixed_binomial(const ExperimentConfig& cfg, unsigned threads = 1);

/// Runs the sweep named by cfg.sweep.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg, unsigned threads = 1);

/// `param,trials,failures,rate,ci_low,ci_high,realized_dbar`
void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records);
/// `c,rate_fixed,rate_binomial,diff,ci_low,ci_high`
void write_comparison_csv(std::ostream& out, const std::vector<Comparison>& rows);

/// Flat `key = value` lines with `#` comments. Keys: m, dbar, mode
/// (fixed|binomial), c_grid or alpha_grid (+ c), trials, seed, sampling
/// (with_replacement|without_replacement). seed is mandatory.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace lpm
