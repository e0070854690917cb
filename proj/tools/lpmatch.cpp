// lpmatch command-line front end.
//
// Exit status: 0 on success, 1 on domain errors, 2 on usage errors (bad
// flags, unreadable or malformed config files).

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "lpmatch/failprob.hpp"
#include "lpmatch/graph.hpp"
#include "lpmatch/matching.hpp"
#include "lpmatch/montecarlo.hpp"
#include "lpmatch/structure.hpp"
#include "lpmatch/threshold.hpp"
#include "suites.hpp"

namespace {

constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Opens --out lazily so that a failing command leaves no empty file behind.
class Output {
 public:
  explicit Output(std::string path) : path_(std::move(path)) {}

  std::ostream& stream() {
    if (path_.empty() || path_ == "-") return std::cout;
    if (!file_) {
      file_ = std::make_unique<std::ofstream>(path_);
      if (!*file_) throw UsageError("cannot open " + path_ + " for writing");
    }
    return *file_;
  }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
};

lpm::BipartiteMultigraph load_graph(const std::string& path) {
  if (path.empty() || path == "-") return lpm::read_graph(std::cin);
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  return lpm::read_graph(in);
}

std::string join(const std::vector<lpm::Node>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + std::to_string(values[i]);
  return s;
}

lpm::SamplingMode parse_sampling(const std::string& s) {
  return s == "without" ? lpm::SamplingMode::WithoutReplacement
                        : lpm::SamplingMode::WithReplacement;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random bipartite matching toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "0.1.0");

  std::string out_path;
  std::string format = "csv";
  unsigned threads = 1;
  auto shared = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "Output file (default stdout)");
    cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv"}));
  };

  // generate
  auto* gen = app.add_subcommand("generate", "Sample a graph and print it");
  std::size_t gen_n = 0;
  std::size_t gen_m = 0;
  std::optional<double> gen_dbar;
  std::optional<unsigned> gen_degree;
  std::string gen_mode = "fixed";
  std::string gen_sampling = "with";
  std::uint64_t gen_seed = 0;
  gen->add_option("--n", gen_n, "Left nodes")->required()->check(CLI::PositiveNumber);
  gen->add_option("--m", gen_m, "Right nodes")->required()->check(CLI::PositiveNumber);
  auto* dbar_opt = gen->add_option("--dbar", gen_dbar, "Average degree (> 2), split floor/ceil");
  auto* degree_opt = gen->add_option("--degree", gen_degree, "Fixed degree for every node")
                         ->check(CLI::PositiveNumber);
  dbar_opt->excludes(degree_opt);
  gen->add_option("--mode", gen_mode, "fixed or binomial split")
      ->check(CLI::IsMember({"fixed", "binomial"}));
  gen->add_option("--sampling", gen_sampling, "Neighbor draws")
      ->check(CLI::IsMember({"with", "without"}));
  gen->add_option("--seed", gen_seed, "Random seed")->required();
  shared(gen);

  // match
  auto* match = app.add_subcommand("match", "Decide left-perfect matchability");
  std::string graph_path = "-";
  match->add_option("--graph", graph_path, "Graph file ('-' for stdin)");
  shared(match);

  // classify
  auto* classify = app.add_subcommand("classify", "Node classes and partition of a matchable graph");
  classify->add_option("--graph", graph_path, "Graph file ('-' for stdin)");
  shared(classify);

  // fail
  auto* fail = app.add_subcommand("fail", "Failure probability for two extra nodes");
  unsigned dy = 0;
  unsigned dz = 0;
  fail->add_option("--graph", graph_path, "Residual graph file ('-' for stdin)");
  fail->add_option("--dy", dy, "Degree of the first extra node")->required()->check(CLI::PositiveNumber);
  fail->add_option("--dz", dz, "Degree of the second extra node")->required()->check(CLI::PositiveNumber);
  shared(fail);

  // threshold
  auto* threshold = app.add_subcommand("threshold", "Matchability threshold c*(dbar)");
  std::vector<double> dbars;
  threshold->add_option("--dbar", dbars, "Average degree(s) > 2")
      ->required()
      ->delimiter(',')
      ->check(CLI::Range(2.0, 1e6));
  shared(threshold);

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Monte Carlo failure-rate sweep");
  std::string config_path;
  bool compare = false;
  experiment->add_option("--config", config_path, "Experiment config file")->required();
  experiment->add_option("--threads", threads, "Worker threads (0 = all cores)");
  experiment->add_flag("--compare", compare, "Fixed minus binomial difference over c_grid");
  shared(experiment);

  // verify
  auto* verify = app.add_subcommand("verify", "Run property suites against the oracles");
  std::string suite = "all";
  lpm::verify::SuiteOptions suite_opt;
  std::string rows_path;
  bool strict = false;
  std::vector<std::string> choices = lpm::verify::suite_names();
  choices.push_back("all");
  verify->add_option("--suite", suite, "Suite name or 'all'")->check(CLI::IsMember(choices));
  verify->add_option("--max-m", suite_opt.max_m, "Largest m for the lemma grids")
      ->check(CLI::Range(2, 20));
  verify->add_option("--seed", suite_opt.seed, "Seed for the sampled suites");
  verify->add_option("--instances", suite_opt.instances, "Override the instance count");
  verify->add_option("--rows", rows_path, "Write lemma grid rows as CSV here");
  verify->add_flag("--strict", strict, "Exit 1 when any suite fails");
  shared(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    Output out(out_path);
    std::ostream& os = out.stream();

    if (*gen) {
      lpm::DegreeSpec spec = [&] {
        if (gen_degree) {
          return lpm::DegreeSpec(std::vector<lpm::DegreeDistribution>(
              gen_n, lpm::DegreeDistribution::point_mass(*gen_degree)));
        }
        if (!gen_dbar) throw UsageError("generate needs --dbar or --degree");
        return gen_mode == "fixed" ? lpm::fixed_split_spec(gen_n, *gen_dbar)
                                   : lpm::binomial_split_spec(gen_n, *gen_dbar);
      }();
      lpm::write_graph(os, lpm::sample_graph(spec, gen_m, gen_seed, parse_sampling(gen_sampling)));
    } else if (*match) {
      const auto result = lpm::has_left_perfect_matching(load_graph(graph_path));
      if (result) os << "MATCHED assignment=" << join(result.assignment()) << '\n';
      else os << "UNMATCHED violator=" << join(result.violator()) << '\n';
    } else if (*classify) {
      const auto g = load_graph(graph_path);
      const auto classes = lpm::classify_right_nodes(g);
      os << "classes=";
      for (std::size_t v = 0; v < classes.size(); ++v) os << (v ? "," : "") << lpm::to_string(classes[v]);
      os << '\n' << lpm::to_text(lpm::bi_partition(g));
    } else if (*fail) {
      const auto g = load_graph(graph_path);
      const auto partition = lpm::bi_partition(g);
      os.precision(17);
      os << "fail=" << lpm::fail_total(dy, dz, g) << " exact="
         << lpm::fail_exact(dy, dz, partition.bi, g.right_count()) << '\n';
    } else if (*threshold) {
      lpm::write_threshold_csv(os, dbars);
    } else if (*experiment) {
      const auto cfg = lpm::load_config(config_path);
      if (compare) lpm::write_comparison_csv(os, lpm::compare_fixed_binomial(cfg, threads));
      else lpm::write_records_csv(os, lpm::run_experiment(cfg, threads));
    } else if (*verify) {
      std::unique_ptr<std::ofstream> rows;
      if (!rows_path.empty()) {
        rows = std::make_unique<std::ofstream>(rows_path);
        if (!*rows) throw UsageError("cannot open " + rows_path + " for writing");
        suite_opt.rows = rows.get();
      }
      bool all_passed = true;
      for (const auto& name : lpm::verify::suite_names()) {
        if (suite != "all" && suite != name) continue;
        const auto result = lpm::verify::run_suite(name, suite_opt);
        all_passed = all_passed && result.passed();
        os << (result.passed() ? "PASS " : "FAIL ") << result.summary() << '\n';
      }
      if (strict && !all_passed) return kDomainError;
    }
    os.flush();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const lpm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.code()) {
      case lpm::Errc::ParseError:
      case lpm::Errc::UnknownKey:
      case lpm::Errc::InvalidValue:
        return kUsageError;
      default:
        return kDomainError;
    }
  }
  return 0;
}
