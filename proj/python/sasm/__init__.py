"""Stochastic abelian sandpile models.

Thin Python surface over the C++ core: grid and random spec builders, the
REDUCE fixed-point pruning with FSC witnesses, the gluing calculus for
building larger forbidden sub-configurations, and an exhaustive brute-force
recurrence oracle for small instances.
"""

from ._sasm import (
    RecurrentSet,
    SandpileSpec,
    SasmError,
    c_max,
    decide_fsc_exists,
    enumerate_fsc_supports,
    enumerate_minimal_fscs,
    glue,
    grid_ne_sw,
    grid_ns_ew,
    grid_site_name,
    is_forbidden,
    is_irreducible,
    is_minimal_irreducible,
    is_recurrent,
    is_stable,
    layered_decomposition,
    manna_fsc_chain,
    minimal_irreducible_subsandpiles,
    random_spec,
    recurrent_stable_set,
    reduce,
    render_region,
    restrict_spec,
    stabilize,
    stabilize_outcomes,
    topple,
    union_subsandpiles,
    unstable_sites,
    validate,
)

__all__ = [
    "RecurrentSet",
    "SandpileSpec",
    "SasmError",
    "c_max",
    "decide_fsc_exists",
    "enumerate_fsc_supports",
    "enumerate_minimal_fscs",
    "glue",
    "grid_ne_sw",
    "grid_ns_ew",
    "grid_site_name",
    "is_forbidden",
    "is_irreducible",
    "is_minimal_irreducible",
    "is_recurrent",
    "is_stable",
    "layered_decomposition",
    "manna_fsc_chain",
    "minimal_irreducible_subsandpiles",
    "random_spec",
    "recurrent_stable_set",
    "reduce",
    "render_region",
    "restrict_spec",
    "stabilize",
    "stabilize_outcomes",
    "topple",
    "union_subsandpiles",
    "unstable_sites",
    "validate",
]
