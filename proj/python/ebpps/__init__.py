"""Single-pass bounded-size sampling with exact probability-proportional-to-size
guarantees, plus its verification harness and the threshold baseline."""

import json as _json
from fractions import Fraction as _Fraction

try:
    from ._ebpps import (  # type: ignore[attr-defined]
        Sampler,
        ThresholdSolution,
        branch_coverage_json,
        closed_form_rho,
        exhaustive_inclusion as _exhaustive_inclusion_raw,
        monte_carlo_inclusion_json,
        pps_violation,
        solve_tau,
        __version__,
    )
except ImportError:  # running against an in-tree build dir on PYTHONPATH
    from _ebpps import (  # type: ignore[no-redef]
        Sampler,
        ThresholdSolution,
        branch_coverage_json,
        closed_form_rho,
        exhaustive_inclusion as _exhaustive_inclusion_raw,
        monte_carlo_inclusion_json,
        pps_violation,
        solve_tau,
        __version__,
    )

__all__ = [
    "Sampler",
    "ThresholdSolution",
    "branch_coverage",
    "closed_form_rho",
    "exhaustive_inclusion",
    "monte_carlo_inclusion",
    "pps_violation",
    "solve_tau",
    "__version__",
]


def monte_carlo_inclusion(stream, bound, trials, seed=0, threads=0):
    """Monte-Carlo verification of the inclusion probabilities.

    `stream` is an iterable of (id, weight) pairs with unique ids. Returns the
    report as a dict; report["pass"] tells whether every check held.
    """
    return _json.loads(
        monte_carlo_inclusion_json(list(stream), bound, trials, seed, threads)
    )


def branch_coverage(seed=0xEBB5, trials=200000):
    """Runs the branch-coverage verification suite; returns the report dict."""
    return _json.loads(branch_coverage_json(seed, trials))


def exhaustive_inclusion(weights, bound):
    """Exact inclusion probabilities as `Fraction`s via full enumeration of
    the sampler's random branches. Small integer weights only."""
    return [_Fraction(text) for text in _exhaustive_inclusion_raw(list(weights), bound)]
