"""Effective resistance, effective capacitance and witness sizes, exactly.

Values are :class:`fractions.Fraction`; ``INF`` (``math.inf``) encodes a
disconnected pair for resistance and a connected pair for capacitance.

Effective capacitance uses the unit-potential definition: minimise
``sum (theta(u) - theta(v))**2`` over the absent edges ``E(G) \\ E(G(x))``,
where ``theta(s) = 1``, ``theta(t) = 0`` and ``theta`` is constant on every
component of ``G(x)``.  Equivalently: contract the components of ``G(x)`` and
take the effective conductance of the absent edges between the ``s`` and ``t``
classes.
"""

from __future__ import annotations

import math
from collections import deque
from fractions import Fraction

from .compose import STProblem
from .errors import PreconditionViolated
from .exact import effective_conductance, energy, harmonic_extension, solve_rational
from .graph import SimpleGraph, as_assignment, components, count_spanning_trees, count_spanning_trees_with_edge

INF = math.inf
ExtendedRational = Fraction | float


def fmt(value: ExtendedRational) -> str:
    """Render as ``"p/q"`` (``"p"`` for integers) or ``"inf"``."""
    if value == INF:
        return "inf"
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def parse(text: str) -> ExtendedRational:
    return INF if text == "inf" else Fraction(text)


def _unit(edges):
    return [(u, v, 1) for u, v in edges]


def resistance_between(H: SimpleGraph, u: int, v: int) -> ExtendedRational:
    """``R_{u,v}(H)`` for a realised graph."""
    H.check_vertex(u, v)
    if u == v:
        return Fraction(0)
    c = effective_conductance(H.n, _unit(H.edges), u, v)
    return INF if c == 0 else 1 / c


def effective_resistance(P: STProblem, x) -> ExtendedRational:
    return resistance_between(P.realise(x), P.s, P.t)


def effective_capacitance(P: STProblem, x) -> ExtendedRational:
    x = as_assignment(x)
    H = P.realise(x)
    comp = components(H)
    if comp[P.s] == comp[P.t]:
        return INF
    absent = [(comp[e.u], comp[e.v], 1) for e in P.graph.edges if not e.present(x.bits)]
    return effective_conductance(P.graph.n, absent, comp[P.s], comp[P.t])


def _st_component(H: SimpleGraph, s: int) -> set[int]:
    comp = components(H)
    return {v for v in range(H.n) if comp[v] == comp[s]}


def approx_negative_witness(P: STProblem, x) -> Fraction:
    """Energy of the best extension of the harmonic s-t potential to all of ``G``.

    Stage one solves for the potential on the s-t component of ``G(x)``
    (present edges, ``s -> 1``, ``t -> 0``); stage two fixes those values and
    minimises the energy over every edge of ``G``.
    """
    H = P.realise(x)
    comp = components(H)
    if comp[P.s] != comp[P.t]:
        raise PreconditionViolated("s and t are not connected in G(x)")
    inner = harmonic_extension(H.n, _unit(H.edges), {P.s: 1, P.t: 0})
    fixed = {v: inner[v] for v in range(H.n) if comp[v] == comp[P.s]}
    all_edges = _unit(e.endpoints for e in P.graph.edges)
    pot = harmonic_extension(P.graph.n, all_edges, fixed)
    return energy(all_edges, pot)


def st_potential(P: STProblem, x) -> list[Fraction]:
    """Harmonic potential of ``G(x)`` with ``s -> 1``, ``t -> 0`` (zero off the s-t component)."""
    H = P.realise(x)
    pot = harmonic_extension(H.n, _unit(H.edges), {P.s: 1, P.t: 0})
    keep = _st_component(H, P.s)
    return [p if v in keep else Fraction(0) for v, p in enumerate(pot)]


def unit_flow_energy(P: STProblem, x) -> Fraction:
    """Minimum energy of a unit s->t flow, by mesh analysis.

    Independent of the nodal solve: start from the unit flow along a BFS-tree
    path and optimise over the fundamental-cycle basis.
    """
    H = P.realise(x)
    keep = _st_component(H, P.s)
    if P.t not in keep:
        raise PreconditionViolated("s and t are not connected in G(x)")
    edges = [(u, v) for u, v in H.edges if u in keep]
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in keep}
    for i, (u, v) in enumerate(edges):
        adj[u].append((v, i))
        adj[v].append((u, i))
    parent: dict[int, tuple[int, int] | None] = {P.s: None}
    depth = {P.s: 0}
    queue = deque([P.s])
    while queue:
        a = queue.popleft()
        for b, i in adj[a]:
            if b not in parent:
                parent[b] = (a, i)
                depth[b] = depth[a] + 1
                queue.append(b)
    tree = {p[1] for p in parent.values() if p is not None}

    def path(a: int, b: int) -> dict[int, int]:
        # signed edge multiset of the tree path a -> b
        flow: dict[int, int] = {}
        up, down = [], []
        while a != b:
            if depth[a] >= depth[b]:
                q, i = parent[a]
                up.append((a, q, i))
                a = q
            else:
                q, i = parent[b]
                down.append((q, b, i))
                b = q
        for src, dst, i in up + down[::-1]:
            flow[i] = flow.get(i, 0) + (1 if src < dst else -1)
        return flow

    m = len(edges)
    f0 = [Fraction(0)] * m
    for i, sgn in path(P.s, P.t).items():
        f0[i] += sgn
    cycles = []
    for i, (u, v) in enumerate(edges):
        if i in tree:
            continue
        cyc = [0] * m
        cyc[i] = 1  # traverse u -> v, return along the tree v -> u
        for j, sgn in path(v, u).items():
            cyc[j] += sgn
        cycles.append(cyc)
    if cycles:
        k = len(cycles)
        gram = [[sum(a * b for a, b in zip(cycles[p], cycles[q])) for q in range(k)] for p in range(k)]
        rhs = [-sum(c * f for c, f in zip(cycles[p], f0)) for p in range(k)]
        coef = solve_rational(gram, rhs)
        for p in range(k):
            for j in range(m):
                if cycles[p][j]:
                    f0[j] += coef[p] * cycles[p][j]
    return sum((f * f for f in f0), Fraction(0))


def edge_resistances(H: SimpleGraph) -> list[Fraction]:
    """``R_{u,v}(H)`` across each edge of ``H``, in edge order."""
    return [resistance_between(H, u, v) for u, v in H.edges]


def resistance_from_spanning_trees(H: SimpleGraph, label: int) -> Fraction:
    """``t_label(H) / t(H)`` on the component containing the edge."""
    i = H.edge_index(label)
    keep = sorted(_st_component(H, H.edges[i][0]))
    index = {v: k for k, v in enumerate(keep)}
    sub = SimpleGraph(
        len(keep),
        tuple((index[u], index[v]) for u, v in H.edges if u in index),
        tuple(lab for (u, _), lab in zip(H.edges, H.labels) if u in index),
    )
    return Fraction(count_spanning_trees_with_edge(sub, label), count_spanning_trees(sub))
