"""Exact and Monte Carlo walk statistics of Erdos-Renyi graphs.

Exact quantities are returned as ``fractions.Fraction`` or ``int``.
"""

from ._ermm import (
    InvariantError,
    NotProvidedError,
    ResourceError,
    UsageError,
    catalan,
    cumulant_via_diagrams,
    d_seq,
    diagram_counts,
    exact_cumulant,
    h_seq,
    limit_cumulant,
    quartic_identity,
    run_cli,
    sample_edges,
    simulate,
    walk_stat,
)

__all__ = [
    "InvariantError",
    "NotProvidedError",
    "ResourceError",
    "UsageError",
    "catalan",
    "cumulant_via_diagrams",
    "d_seq",
    "diagram_counts",
    "exact_cumulant",
    "h_seq",
    "limit_cumulant",
    "quartic_identity",
    "run_cli",
    "sample_edges",
    "simulate",
    "walk_stat",
]
