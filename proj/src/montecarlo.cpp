#include "lpmatch/montecarlo.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "lpmatch/error.hpp"
#include "lpmatch/matching.hpp"
#include "lpmatch/rng.hpp"
#include "lpmatch/threshold.hpp"

namespace lpm {

namespace {

constexpr double kZ95 = 1.959963984540054;

std::size_t n_for(double c, std::size_t m) {
  return static_cast<std::size_t>(std::max<long>(0, std::lround(c * static_cast<double>(m))));
}

std::uint64_t point_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t grid) {
  return mix_seed(mix_seed(base, stream), grid);
}

DegreeSpec alpha_spec(std::size_t n, unsigned l, double alpha, DegreeMode mode) {
  if (mode == DegreeMode::Fixed) return split_spec(n, l, round_half_even(alpha * n));
  const auto d = make_distribution({{l, alpha}, {l + 1, 1.0 - alpha}});
  return DegreeSpec(std::vector<DegreeDistribution>(n, d));
}

DegreeSpec mode_spec(std::size_t n, double dbar, DegreeMode mode) {
  return mode == DegreeMode::Fixed ? fixed_split_spec(n, dbar) : binomial_split_spec(n, dbar);
}

const std::vector<double>& c_values(const ExperimentConfig& cfg) {
  const auto* grid = std::get_if<CGrid>(&cfg.sweep);
  if (!grid) throw Error(Errc::PreconditionViolated, "experiment needs a c grid");
  return grid->cs;
}

}  // namespace

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(Errc::InvalidValue, what); };
  if (trials < 1) fail("trials must be at least 1");
  if (m < 1) fail("m must be at least 1");
  auto check_c = [&](double c) {
    if (!(c > 0.0 && c <= 1.0)) fail("c must lie in (0, 1]");
    if (n_for(c, m) < 2) fail("round(c * m) must be at least 2");
  };
  if (const auto* a = std::get_if<AlphaGrid>(&sweep)) {
    if (a->alphas.empty()) fail("alpha grid is empty");
    for (double alpha : a->alphas) {
      if (!(alpha >= 0.0 && alpha <= 1.0)) fail("alpha must lie in [0, 1]");
    }
    check_c(a->c);
    if (!(dbar >= 1.0) || !std::isfinite(dbar)) fail("dbar must be at least 1");
  } else {
    const auto& cs = std::get<CGrid>(sweep).cs;
    if (cs.empty()) fail("c grid is empty");
    for (double c : cs) check_c(c);
    if (!(dbar > 2.0) || !std::isfinite(dbar)) fail("dbar must exceed 2");
  }
}

std::size_t round_half_even(double x) {
  if (!(x >= 0.0)) throw Error(Errc::InvalidValue, "cannot round a negative count");
  return static_cast<std::size_t>(std::nearbyint(x));  // default FE_TONEAREST
}

std::pair<double, double> wilson_interval(std::size_t failures, std::size_t trials) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(failures) / n;
  const double z2 = kZ95 * kZ95;
  const double scale = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / scale;
  const double half = kZ95 / scale * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::clamp(center - half, 0.0, p), std::clamp(center + half, p, 1.0)};
}

DegreeSpec fixed_split_spec(std::size_t n, double dbar) {
  const auto q = ThresholdQuery::from_dbar(dbar);
  return split_spec(n, q.l, round_half_even(q.alpha * static_cast<double>(n)));
}

DegreeSpec binomial_split_spec(std::size_t n, double dbar) {
  const auto q = ThresholdQuery::from_dbar(dbar);
  return alpha_spec(n, q.l, q.alpha, DegreeMode::Binomial);
}

ExperimentRecord failure_rate(const DegreeSpec& spec, std::size_t m, std::size_t trials,
                              std::uint64_t base_seed, SamplingMode sampling, unsigned threads) {
  if (trials < 1) throw Error(Errc::PreconditionViolated, "need trials >= 1");
  if (m < 1) throw Error(Errc::PreconditionViolated, "need m >= 1");
  if (sampling == SamplingMode::WithoutReplacement) {
    for (const auto& rho : spec.nodes()) rho.check_against(m);
  }
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, trials));

  auto count = [&](std::size_t begin, std::size_t end) {
    std::size_t failures = 0;
    for (std::size_t t = begin; t < end; ++t) {
      const auto g = sample_graph(spec, m, mix_seed(base_seed, t), sampling);
      if (!maximum_matching(g).is_left_perfect()) ++failures;
    }
    return failures;
  };

  std::vector<std::size_t> partial(threads, 0);
  if (threads == 1) {
    partial[0] = count(0, trials);
  } else {
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < threads; ++w) {
      const std::size_t begin = trials * w / threads;
      const std::size_t end = trials * (w + 1) / threads;
      workers.emplace_back([&, w, begin, end] { partial[w] = count(begin, end); });
    }
    for (auto& worker : workers) worker.join();
  }

  ExperimentRecord r;
  r.trials = trials;
  for (auto f : partial) r.failures += f;
  r.rate = static_cast<double>(r.failures) / static_cast<double>(trials);
  std::tie(r.ci_low, r.ci_high) = wilson_interval(r.failures, trials);
  r.realized_dbar = spec.average_mean();
  return r;
}

std::vector<ExperimentRecord> sweep_c(const ExperimentConfig& cfg, unsigned threads) {
  cfg.validate();
  const auto& cs = c_values(cfg);
  std::vector<ExperimentRecord> out;
  for (std::size_t g = 0; g < cs.size(); ++g) {
    const auto spec = mode_spec(n_for(cs[g], cfg.m), cfg.dbar, cfg.mode);
    auto record = failure_rate(spec, cfg.m, cfg.trials, point_seed(cfg.base_seed, 0, g),
                               cfg.sampling, threads);
    record.param = cs[g];
    out.push_back(record);
  }
  return out;
}

std::vector<ExperimentRecord> sweep_alpha(const ExperimentConfig& cfg, unsigned threads) {
  cfg.validate();
  const auto* grid = std::get_if<AlphaGrid>(&cfg.sweep);
  if (!grid) throw Error(Errc::PreconditionViolated, "sweep_alpha needs an alpha grid");
  const auto l = static_cast<unsigned>(std::floor(cfg.dbar));
  const std::size_t n = n_for(grid->c, cfg.m);
  std::vector<ExperimentRecord> out;
  for (std::size_t g = 0; g < grid->alphas.size(); ++g) {
    const auto spec = alpha_spec(n, l, grid->alphas[g], cfg.mode);
    auto record = failure_rate(spec, cfg.m, cfg.trials, point_seed(cfg.base_seed, 0, g),
                               cfg.sampling, threads);
    record.param = grid->alphas[g];
    out.push_back(record);
  }
  return out;
}

std::vector<Comparison> compare_fixed_binomial(const ExperimentConfig& cfg, unsigned threads) {
  cfg.validate();
  const auto& cs = c_values(cfg);
  std::vector<Comparison> out;
  for (std::size_t g = 0; g < cs.size(); ++g) {
    const std::size_t n = n_for(cs[g], cfg.m);
    Comparison row;
    row.c = cs[g];
    row.fixed = failure_rate(fixed_split_spec(n, cfg.dbar), cfg.m, cfg.trials,
                             point_seed(cfg.base_seed, 0, g), cfg.sampling, threads);
    row.binomial = failure_rate(binomial_split_spec(n, cfg.dbar), cfg.m, cfg.trials,
                                point_seed(cfg.base_seed, 1, g), cfg.sampling, threads);
    row.fixed.param = row.binomial.param = cs[g];
    row.diff = row.fixed.rate - row.binomial.rate;
    const double p1 = row.fixed.rate;
    const double p2 = row.binomial.rate;
    const double se = std::sqrt(p1 * (1.0 - p1) / static_cast<double>(row.fixed.trials) +
                                p2 * (1.0 - p2) / static_cast<double>(row.binomial.trials));
    row.ci_low = row.diff - kZ95 * se;
    row.ci_high = row.diff + kZ95 * se;
    out.push_back(row);
  }
  return out;
}

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg, unsigned threads) {
  return std::holds_alternative<AlphaGrid>(cfg.sweep) ? sweep_alpha(cfg, threads)
                                                      : sweep_c(cfg, threads);
}

void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  const auto precision = out.precision(10);
  out << "param,trials,failures,rate,ci_low,ci_high,realized_dbar\n";
  for (const auto& r : records) {
    out << r.param << ',' << r.trials << ',' << r.failures << ',' << r.rate << ',' << r.ci_low
        << ',' << r.ci_high << ',' << r.realized_dbar << '\n';
  }
  out.precision(precision);
}

void write_comparison_csv(std::ostream& out, const std::vector<Comparison>& rows) {
  const auto precision = out.precision(10);
  out << "c,rate_fixed,rate_binomial,diff,ci_low,ci_high\n";
  for (const auto& r : rows) {
    out << r.c << ',' << r.fixed.rate << ',' << r.binomial.rate << ',' << r.diff << ','
        << r.ci_low << ',' << r.ci_high << '\n';
  }
  out.precision(precision);
}

// ---------------------------------------------------------------------------
// Config files

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void bad_value(std::size_t line, const std::string& key, const std::string& value) {
  throw Error(Errc::InvalidValue,
              "line " + std::to_string(line) + ": invalid value '" + value + "' for " + key);
}

double parse_real(std::size_t line, const std::string& key, const std::string& text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) bad_value(line, key, text);
  return value;
}

std::uint64_t parse_count(std::size_t line, const std::string& key, const std::string& text) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) bad_value(line, key, text);
  return value;
}

std::vector<double> parse_list(std::size_t line, const std::string& key, const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) values.push_back(parse_real(line, key, trim(item)));
  if (values.empty()) bad_value(line, key, text);
  return values;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::map<std::string, std::size_t> seen;
  std::optional<std::vector<double>> c_grid;
  std::optional<std::vector<double>> alpha_grid;
  std::optional<double> c;

  std::string raw;
  for (std::size_t line = 1; std::getline(in, raw); ++line) {
    const auto text = trim(raw.substr(0, raw.find('#')));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::ParseError, "line " + std::to_string(line) + ": expected 'key = value'");
    }
    const auto key = trim(text.substr(0, eq));
    const auto value = trim(text.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw Error(Errc::ParseError, "line " + std::to_string(line) + ": empty key or value");
    }
    if (!seen.emplace(key, line).second) {
      throw Error(Errc::ParseError, "line " + std::to_string(line) + ": duplicate key " + key);
    }

    if (key == "m") {
      cfg.m = parse_count(line, key, value);
    } else if (key == "dbar") {
      cfg.dbar = parse_real(line, key, value);
    } else if (key == "mode") {
      if (value == "fixed") cfg.mode = DegreeMode::Fixed;
      else if (value == "binomial") cfg.mode = DegreeMode::Binomial;
      else bad_value(line, key, value);
    } else if (key == "c_grid") {
      c_grid = parse_list(line, key, value);
    } else if (key == "alpha_grid") {
      alpha_grid = parse_list(line, key, value);
    } else if (key == "c") {
      c = parse_real(line, key, value);
    } else if (key == "trials") {
      cfg.trials = parse_count(line, key, value);
    } else if (key == "seed") {
      cfg.base_seed = parse_count(line, key, value);
    } else if (key == "sampling") {
      if (value == "with_replacement") cfg.sampling = SamplingMode::WithReplacement;
      else if (value == "without_replacement") cfg.sampling = SamplingMode::WithoutReplacement;
      else bad_value(line, key, value);
    } else {
      throw Error(Errc::UnknownKey, "line " + std::to_string(line) + ": unknown key " + key);
    }
  }

  for (const char* required : {"m", "dbar", "trials", "seed"}) {
    if (!seen.count(required)) {
      throw Error(Errc::ParseError, std::string("missing required key ") + required);
    }
  }
  if (c_grid.has_value() == alpha_grid.has_value()) {
    throw Error(Errc::ParseError, "exactly one of c_grid and alpha_grid is required");
  }
  if (alpha_grid) {
    if (!c) throw Error(Errc::ParseError, "alpha_grid needs c");
    cfg.sweep = AlphaGrid{*alpha_grid, *c};
  } else {
    if (c) throw Error(Errc::ParseError, "c is only used with alpha_grid");
    cfg.sweep = CGrid{*c_grid};
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path.string());
  return parse_config(in);
}

}  // namespace lpm
