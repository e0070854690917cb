#pragma once

// Property suites shared by `lpmatch verify` and the acceptance binary.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lpmatch/failprob.hpp"

namespace lpm::verify {

struct SuiteResult {
  std::string name;
  std::size_t checked = 0;
  std::size_t failures = 0;
  /// First counterexample, or extra counts for the grid suites.
  std::string detail;

  bool passed() const noexcept { return checked > 0 && failures == 0; }
  /// `<name>: <checked> checked, <failures> failed[; detail]`
  std::string summary() const;
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  /// 0 picks the suite's default count.
  std::size_t instances = 0;
  std::size_t max_m = 12;
  /// Grid suites write one CSV row per grid point here when set.
  std::ostream* rows = nullptr;
};

/// Efficient classification, H-edges (both methods), bi_partition, the
/// matching decision and the matching count against enumeration.
/// Default 1000 matchable graphs with n, m <= 7.
SuiteResult structure_suite(const SuiteOptions& opt);

/// H_V connectivity for every V of non-blocked nodes, transitivity of the
/// no-edge relation, and complete cross-class H-edges. Default 1000 graphs.
SuiteResult claims_suite(const SuiteOptions& opt);

/// fail_total against brute-force conditional failure on matchable residual
/// graphs with n, m <= 6, to 1e-12. Default 500 graphs.
SuiteResult failprob_suite(const SuiteOptions& opt);

SuiteResult lemma2_suite(const SuiteOptions& opt);
SuiteResult lemma3_suite(const SuiteOptions& opt);

/// The two boundary events for the reduced convexity inequality, the l = 3
/// member of the second family, and K == lhs - rhs on all compositions with
/// m <= 8.
SuiteResult convexity_suite(const SuiteOptions& opt);

/// Exact success probability strictly increases under the mean-preserving
/// shift of a node with a support gap >= 2. Default 50 configurations with
/// n, m <= 5 and dyadic masses.
SuiteResult lemma1_suite(const SuiteOptions& opt);

/// Mixed-degree solver against the k-uniform closed form for k = 3, 4, 5.
SuiteResult threshold_suite(const SuiteOptions& opt);

const std::vector<std::string>& suite_names();

/// Throws lpm::Error(InvalidValue) for an unknown name.
SuiteResult run_suite(const std::string& name, const SuiteOptions& opt);

}  // namespace lpm::verify
