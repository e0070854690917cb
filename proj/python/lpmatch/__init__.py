"""Random bipartite matching toolkit.

Thin Python layer over the C++ core: sampling graphs with per-node degree
distributions, left-perfect matching, the blocked/free/half-free structure,
closed-form failure probabilities and the 2-core matchability threshold.
"""

from ._core import (
    DegreeDistribution,
    DegreeSpec,
    Graph,
    LpmatchError,
    SamplingMode,
    SpecMode,
    bi_partition,
    classify_right_nodes,
    convexity_K_check,
    core_density,
    fail_closed_form,
    fail_total,
    failure_rate,
    lemma2_check,
    lemma3_check,
    match,
    near_optimal_spec,
    sample_graph,
    success_probability_exact,
    threshold_c_star,
)

__all__ = [
    "DegreeDistribution",
    "DegreeSpec",
    "Graph",
    "LpmatchError",
    "SamplingMode",
    "SpecMode",
    "bi_partition",
    "classify_right_nodes",
    "convexity_K_check",
    "core_density",
    "fail_closed_form",
    "fail_total",
    "failure_rate",
    "lemma2_check",
    "lemma3_check",
    "match",
    "near_optimal_spec",
    "sample_graph",
    "success_probability_exact",
    "threshold_c_star",
]

__version__ = "0.1.0"
