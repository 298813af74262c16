"""Congruence quotients of groups generated by rooted and directed
automorphisms of the p-adic tree: exact arithmetic on truncated
automorphisms, quotient enumeration, and closed-form exponent checks."""

import json as _json

from ._core import (
    GroupSpec,
    LimitExceededError,
    QuotientGroup,
    TreeAut,
    bar_closure,
    commutator,
    conjugate,
    deep_witness_word,
    directed_generator,
    enumerate_quotient,
    find_preimage,
    first_section_lift,
    fp_rank,
    in_sum_zero_hyperplane,
    path_conjugator,
    predicted_exponent,
    predicted_level2_order,
    rebalance_stabilizer_word,
    verify_report,
)

__all__ = [
    "GroupSpec",
    "LimitExceededError",
    "QuotientGroup",
    "TreeAut",
    "bar_closure",
    "commutator",
    "conjugate",
    "deep_witness_word",
    "directed_generator",
    "enumerate_quotient",
    "find_preimage",
    "first_section_lift",
    "fp_rank",
    "in_sum_zero_hyperplane",
    "path_conjugator",
    "predicted_exponent",
    "predicted_level2_order",
    "rebalance_stabilizer_word",
    "verify",
    "verify_report",
]


def verify(spec, max_level=3, witness_depth=0, max_elements=2_000_000,
           threads=1):
    """Like verify_report, but returns the report as a dict."""
    return _json.loads(
        verify_report(spec, max_level, witness_depth, max_elements, threads))
