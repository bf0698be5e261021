"""Reductions to st-connectivity and the electrical quantities that price them."""

from .compose import (
    STProblem,
    bipartite_double,
    g_bip,
    g_cyc,
    g_ell,
    g_even,
    g_even_ell,
    g_minus,
    g_one,
    parallel,
    series,
)
from .electrical import (
    INF,
    approx_negative_witness,
    effective_capacitance,
    effective_resistance,
    unit_flow_energy,
)
from .graph import (
    ALWAYS,
    Assignment,
    Edge,
    LabeledGraph,
    Literal,
    SimpleGraph,
    circuit_rank,
    count_spanning_trees,
    count_spanning_trees_with_edge,
    has_cycle,
    has_even_cycle,
    has_odd_path,
    instantiate,
    is_bipartite_component,
    is_cactus,
    is_st_connected,
)

__all__ = [
    "ALWAYS",
    "Assignment",
    "Edge",
    "INF",
    "LabeledGraph",
    "Literal",
    "STProblem",
    "SimpleGraph",
    "approx_negative_witness",
    "bipartite_double",
    "circuit_rank",
    "count_spanning_trees",
    "count_spanning_trees_with_edge",
    "effective_capacitance",
    "effective_resistance",
    "g_bip",
    "g_cyc",
    "g_ell",
    "g_even",
    "g_even_ell",
    "g_minus",
    "g_one",
    "has_cycle",
    "has_even_cycle",
    "has_odd_path",
    "instantiate",
    "is_bipartite_component",
    "is_cactus",
    "is_st_connected",
    "parallel",
    "series",
    "unit_flow_energy",
]

__version__ = "0.1.0"
SCHEMA = "stconn-kit/1"
