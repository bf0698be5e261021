"""Series/parallel composition and the reduction-graph constructors.

Vertex and edge numbering of every constructor is deterministic, so repeated
builds serialise byte-identically.  Composite graphs may contain parallel
edges (e.g. two single-edge problems in parallel); labels stay unique.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

from .errors import IncompatibleProblems, InvalidGraph
from .graph import Edge, LabeledGraph, SimpleGraph, instantiate, is_st_connected


@dataclass(frozen=True)
class STProblem:
    graph: LabeledGraph
    s: int
    t: int
    provenance: str = ""

    def __post_init__(self):
        self.graph.check_vertex(self.s, self.t)
        if self.s == self.t:
            raise InvalidGraph("s and t must be distinct")

    @property
    def N(self) -> int:
        return self.graph.N

    def realise(self, x) -> SimpleGraph:
        return instantiate(self.graph, x)

    def connected(self, x) -> bool:
        return is_st_connected(self.realise(x), self.s, self.t)


def _relabel(edges: Iterable[Edge], vmap: Sequence[int], start: int) -> list[Edge]:
    return [Edge(vmap[e.u], vmap[e.v], start + k, e.binding) for k, e in enumerate(edges)]


def _check_same_space(A: STProblem, B: STProblem) -> None:
    if A.N != B.N:
        raise IncompatibleProblems(f"variable spaces differ: N={A.N} vs N={B.N}")


def _others(P: STProblem, skip: Sequence[int]) -> list[int]:
    return [v for v in range(P.graph.n) if v not in skip]


def parallel(A: STProblem, B: STProblem) -> STProblem:
    """Identify the two ``s`` vertices and the two ``t`` vertices (logical OR).

    The result has ``s = 0`` and ``t = 1``; remaining vertices of ``A`` then
    ``B`` follow in their original order.
    """
    _check_same_space(A, B)
    n = 2
    maps = []
    for P in (A, B):
        vmap = [0] * P.graph.n
        vmap[P.s], vmap[P.t] = 0, 1
        for v in _others(P, (P.s, P.t)):
            vmap[v] = n
            n += 1
        maps.append(vmap)
    edges = _relabel(A.graph.edges, maps[0], 0)
    edges += _relabel(B.graph.edges, maps[1], len(edges))
    return STProblem(LabeledGraph(n, tuple(edges), A.N), 0, 1, f"par({A.provenance},{B.provenance})")


def series(A: STProblem, B: STProblem) -> STProblem:
    """Identify ``A.t`` with ``B.s`` as a fresh vertex (logical AND).

    The result has ``s = A.s = 0``, ``t = B.t = 1`` and the joint vertex ``2``.
    """
    _check_same_space(A, B)
    n = 3
    amap = [0] * A.graph.n
    amap[A.s], amap[A.t] = 0, 2
    for v in _others(A, (A.s, A.t)):
        amap[v] = n
        n += 1
    bmap = [0] * B.graph.n
    bmap[B.s], bmap[B.t] = 2, 1
    for v in _others(B, (B.s, B.t)):
        bmap[v] = n
        n += 1
    edges = _relabel(A.graph.edges, amap, 0)
    edges += _relabel(B.graph.edges, bmap, len(edges))
    return STProblem(LabeledGraph(n, tuple(edges), A.N), 0, 1, f"ser({A.provenance},{B.provenance})")


def empty_problem(N: int, provenance: str = "empty") -> STProblem:
    return STProblem(LabeledGraph(2, (), N), 0, 1, provenance)


def parallel_all(problems: Iterable[STProblem], N: int, provenance: str) -> STProblem:
    """OR of many problems; the empty OR is a two-vertex edgeless graph."""
    problems = list(problems)
    if not problems:
        return empty_problem(N, provenance)
    out = reduce(parallel, problems)
    return STProblem(out.graph, out.s, out.t, provenance)


def single_edge(binding, N: int, provenance: str = "edge") -> STProblem:
    return STProblem(LabeledGraph(2, (Edge(0, 1, 0, binding),), N), 0, 1, provenance)


# --- reductions -------------------------------------------------------------


def g_minus(G: LabeledGraph, label: int, s_endpoint: int | None = None) -> STProblem:
    """``G`` without edge ``label``; its endpoints become ``s`` and ``t``.

    ``s_endpoint`` picks which endpoint is ``s`` (default: the lower id).
    """
    e = G.edge(label)
    s = e.u if s_endpoint is None else s_endpoint
    if s not in e.endpoints:
        raise InvalidGraph(f"vertex {s} is not an endpoint of edge {label}")
    t = e.v if s == e.u else e.u
    return STProblem(G.without(label), s, t, f"minus[{label}]")


def g_one(G: LabeledGraph, label: int) -> STProblem:
    return single_edge(G.edge(label).binding, G.N, f"one[{label}]")


def g_ell(G: LabeledGraph, label: int, s_endpoint: int | None = None) -> STProblem:
    """st-connected under ``x`` iff a cycle of ``G(x)`` passes through ``label``."""
    P = series(g_one(G, label), g_minus(G, label, s_endpoint))
    return STProblem(P.graph, P.s, P.t, f"ell[{label}]")


def g_cyc(G: LabeledGraph) -> STProblem:
    """st-connected under ``x`` iff ``G(x)`` contains a cycle."""
    return parallel_all((g_ell(G, e.label) for e in G.edges), G.N, "cyc")


def bipartite_double(G: LabeledGraph, u: int, v: int) -> STProblem:
    """Kronecker cover with ``s = u_0`` and ``t = v_1``.

    Copy ``p`` of vertex ``a`` is vertex ``a + p * n``; edge ``{a, b}`` yields
    ``{a_0, b_1}`` then ``{a_1, b_0}``, both with the original binding.
    """
    G.check_vertex(u, v)
    n = G.n
    edges = []
    for e in G.edges:
        edges.append(Edge(e.u, e.v + n, len(edges), e.binding))
        edges.append(Edge(e.u + n, e.v, len(edges), e.binding))
    return STProblem(LabeledGraph(2 * n, tuple(edges), G.N), u, v + n, f"double[{u},{v}]")


def g_bip(G: LabeledGraph) -> STProblem:
    """st-connected under ``x`` iff ``G(x)`` has an odd cycle."""
    return parallel_all((bipartite_double(G, u, u) for u in range(G.n)), G.N, "bip")


def g_even_ell(G: LabeledGraph, label: int) -> STProblem:
    e = G.edge(label)
    P = series(g_one(G, label), bipartite_double(G.without(label), e.u, e.v))
    return STProblem(P.graph, P.s, P.t, f"even[{label}]")


def g_even(G: LabeledGraph) -> STProblem:
    """Parallel composition of :func:`g_even_ell` over every edge.

    Connected iff some present edge ``{u, v}`` closes an odd walk from ``u``
    to ``v`` that avoids it.  This is implied by, but not equivalent to, an
    even simple cycle: the walk may revisit vertices (two triangles sharing a
    vertex give a false positive).
    """
    return parallel_all((g_even_ell(G, e.label) for e in G.edges), G.N, "even")


REDUCTIONS = {
    "cyc": g_cyc,
    "bip": g_bip,
    "even": g_even,
}


def build_reduction(kind: str, G: LabeledGraph, u: int | None = None, v: int | None = None) -> STProblem:
    if kind == "double":
        if u is None:
            raise ValueError("double needs u (and optionally v)")
        return bipartite_double(G, u, u if v is None else v)
    try:
        return REDUCTIONS[kind](G)
    except KeyError:
        raise ValueError(f"unknown reduction {kind!r}") from None
