"""Invariant suites with exact oracles.

Each suite returns a :class:`SuiteResult`; a failing suite carries the first
counterexample found (graph JSON plus assignment).  Iteration order is fixed,
so "first" is reproducible.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Callable, Iterator

import networkx as nx
import numpy as np

from .bounds import cycle_grid, family_bound, family_problem
from .compose import (
    STProblem,
    bipartite_double,
    g_bip,
    g_cyc,
    g_ell,
    g_even,
    g_even_ell,
    parallel,
    series,
    single_edge,
)
from .electrical import (
    INF,
    approx_negative_witness,
    effective_capacitance,
    effective_resistance,
    edge_resistances,
    fmt,
    resistance_between,
    resistance_from_spanning_trees,
    unit_flow_energy,
)
from .errors import SimulationTooLarge
from .graph import (
    ALWAYS,
    Assignment,
    Edge,
    LabeledGraph,
    Literal,
    SimpleGraph,
    all_assignments,
    circuit_rank,
    complete_graph,
    components,
    contract,
    count_spanning_trees,
    delete,
    from_edges,
    graph_from_dict,
    graph_to_dict,
    has_cycle,
    has_odd_path,
    instantiate,
    is_bipartite_component,
    is_cactus,
    simple_cycles,
    small_graphs,
    st_connected_batch,
)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checked: int
    counterexample: dict | None = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "counterexample": self.counterexample,
            "details": self.details,
        }


class _Tally:
    """Counts checks and keeps the first failure."""

    def __init__(self, name: str):
        self.name = name
        self.checked = 0
        self.failures = 0
        self.first: dict | None = None

    def check(self, ok: bool, witness: Callable[[], dict]) -> bool:
        self.checked += 1
        if not ok:
            self.failures += 1
            if self.first is None:
                self.first = witness()
        return ok

    def result(self, **details) -> SuiteResult:
        if self.failures:
            details = {"failures": self.failures, **details}
        return SuiteResult(self.name, self.failures == 0, self.checked, self.first, details)


def _cx(G: LabeledGraph, x=None, **extra) -> dict:
    out = {"graph": graph_to_dict(G)}
    if x is not None:
        out["x"] = str(x) if isinstance(x, Assignment) else "".join(map(str, x))
    for k, v in extra.items():
        out[k] = fmt(v) if isinstance(v, Fraction) or v == INF else v
    return out


def _graphs(nmin: int, nmax: int, connected: bool = False) -> Iterator[LabeledGraph]:
    for n in range(nmin, nmax + 1):
        yield from small_graphs(n, connected=connected)


def _rows(N: int) -> Iterator[Assignment]:
    for row in all_assignments(N):
        yield Assignment(tuple(row))


def _inv(v):
    if v == 0:
        return INF
    if v == INF:
        return Fraction(0)
    return 1 / v


def _add(a, b):
    return INF if INF in (a, b) else a + b


def _nx(H: SimpleGraph) -> nx.MultiGraph:
    g = nx.MultiGraph()
    g.add_nodes_from(range(H.n))
    g.add_edges_from(H.edges)
    return g


# --- graph core ----------------------------------------------------------------


def graph_core_suite(nmax: int | None = None, seed: int = 0) -> SuiteResult:
    """Circuit rank vs cycles, deletion-contraction, odd self-walks, cactus cycle count."""
    top = 6 if nmax is None else nmax
    tally = _Tally("graph-core")
    for G in _graphs(1, top):
        H = instantiate(G, [1] * G.N)
        cyc = bool(nx.cycle_basis(nx.Graph(H.edges))) if H.m else False
        tally.check(has_cycle(H) == cyc and (circuit_rank(H) == 0) == (not cyc),
                    lambda: _cx(G, [1] * G.N, property="circuit rank zero iff acyclic"))
        if len(set(components(H))) == 1:
            t = count_spanning_trees(H)
            for lab in H.labels:
                tally.check(t == count_spanning_trees(delete(H, lab)) + count_spanning_trees(contract(H, lab)),
                            lambda: _cx(G, [1] * G.N, property="deletion-contraction", edge=lab))
    for G in _graphs(1, min(top, 5)):
        H = instantiate(G, [1] * G.N)
        for u in range(H.n):
            tally.check(has_odd_path(H, u, u) == (not is_bipartite_component(H, u)),
                        lambda: _cx(G, [1] * G.N, property="odd self-walk iff non-bipartite", u=u))
    cacti = 0
    for G in _graphs(1, max(top, 7)):
        H = instantiate(G, [1] * G.N)
        if is_cactus(H):
            cacti += 1
            tally.check(circuit_rank(H) == len(simple_cycles(H)),
                        lambda: _cx(G, [1] * G.N, property="cactus circuit rank"))
    return tally.result(cacti=cacti)


# --- electrical identities --------------------------------------------------------


def _cyclic_instances(nmax: int, spot: int, seed: int) -> Iterator[tuple[LabeledGraph, STProblem, Assignment, bool]]:
    """Every cyclic ``(G, x)`` with ``G`` on at most ``nmax`` vertices, then seeded spot checks at n = 6, 7."""
    for G in _graphs(3, nmax):
        P = None
        for x in _rows(G.N):
            if has_cycle(instantiate(G, x)):
                P = P or g_cyc(G)
                yield G, P, x, False
    rng = np.random.default_rng(seed)
    for n in (6, 7):
        made = 0
        while made < spot:
            pairs = [p for p in itertools.combinations(range(n), 2) if rng.random() < 0.6]
            G = from_edges(n, pairs)
            x = Assignment(tuple(int(b) for b in rng.random(G.N) < 0.7))
            if has_cycle(instantiate(G, x)):
                made += 1
                yield G, g_cyc(G), x, True


def circuit_rank_suite(nmax: int | None = None, seed: int = 0, spot: int = 120) -> SuiteResult:
    """``R(g_cyc(G), x) == 1 / circuit_rank(G(x))`` whenever ``G(x)`` has a cycle."""
    tally = _Tally("circuit-rank")
    spots = 0
    for G, P, x, spotted in _cyclic_instances(5 if nmax is None else nmax, spot, seed):
        r = circuit_rank(instantiate(G, x))
        R = effective_resistance(P, x)
        spots += spotted
        tally.check(R == Fraction(1, r), lambda: _cx(G, x, R=R, circuit_rank=r))
    return tally.result(spot_checks=spots)


def appendix_a_suite(nmax: int | None = None, seed: int = 0, spot: int = 120) -> SuiteResult:
    """``1 / R(g_cyc(G), x) == sum over edges of G(x) of (1 - R_uv(G(x)))``."""
    tally = _Tally("appendix-a")
    for G, P, x, _ in _cyclic_instances(5 if nmax is None else nmax, spot, seed):
        lhs = 1 / effective_resistance(P, x)
        rhs = sum((1 - r for r in edge_resistances(instantiate(G, x))), Fraction(0))
        tally.check(lhs == rhs, lambda: _cx(G, x, inverse_R=lhs, edge_sum=rhs))
    return tally.result()


def edge_sum_suite(nmax: int | None = None, seed: int = 0) -> SuiteResult:
    """Per component, the resistances across its edges sum to its vertex count minus one."""
    tally = _Tally("edge-sum")
    for G in _graphs(1, 6 if nmax is None else nmax):
        H = instantiate(G, [1] * G.N)
        comp = components(H)
        total: dict[int, Fraction] = {}
        for (u, _), r in zip(H.edges, edge_resistances(H)):
            total[comp[u]] = total.get(comp[u], Fraction(0)) + r
        for c, value in total.items():
            size = comp.count(c)
            tally.check(value == size - 1, lambda: _cx(G, [1] * G.N, component=c, sum=value))
    return tally.result()


def spanning_tree_suite(nmax: int | None = None, seed: int = 0) -> SuiteResult:
    """``R_uv == t_l / t`` across every edge of every connected graph."""
    tally = _Tally("spanning-tree")
    graphs = 0
    for G in _graphs(2, 7 if nmax is None else nmax, connected=True):
        graphs += 1
        H = instantiate(G, [1] * G.N)
        for (u, v), lab in zip(H.edges, H.labels):
            a, b = resistance_between(H, u, v), resistance_from_spanning_trees(H, lab)
            tally.check(a == b, lambda: _cx(G, [1] * G.N, edge=lab, R=a, tree_ratio=b))
    return tally.result(graphs=graphs)


def flow_energy_suite(nmax: int | None = None, seed: int = 0) -> SuiteResult:
    """Nodal (Kron) resistance equals the mesh-analysis unit-flow energy."""
    tally = _Tally("flow-energy")
    for G in _graphs(2, 5 if nmax is None else nmax):
        for s, t in itertools.combinations(range(G.n), 2):
            P = STProblem(G, s, t)
            x = Assignment((1,) * G.N)
            if not P.connected(x):
                continue
            a, b = effective_resistance(P, x), unit_flow_energy(P, x)
            tally.check(a == b, lambda: _cx(G, x, s=s, t=t, R=a, flow_energy=b))
    return tally.result()


# --- reductions -------------------------------------------------------------------


def _even_cycle_oracle(H: SimpleGraph) -> bool:
    return any(len(c) % 2 == 0 for c in simple_cycles(H))


def _non_bipartite(H: SimpleGraph) -> bool:
    return not all(is_bipartite_component(H, u) for u in range(H.n))


def _reduction_part(tally: _Tally, G: LabeledGraph, P: STProblem, oracle, kind: str, **extra) -> None:
    rows = all_assignments(G.N)
    got = st_connected_batch(P.graph, P.s, P.t, rows)
    for row, g in zip(rows, got):
        want = oracle(instantiate(G, row))
        tally.check(bool(g) == want, lambda: _cx(G, row, reduction=kind, reduced=bool(g), oracle=want, **extra))


def reduction_suites(nmax: int | None = None, seed: int = 0, bip_nmax: int | None = None) -> list[SuiteResult]:
    """One result per reduction: cycle, odd path, bipartiteness, even cycle."""
    top = 5 if nmax is None else nmax
    btop = min(top, 4) if bip_nmax is None else bip_nmax
    out = []
    tally = _Tally("reductions/cyc")
    for G in _graphs(1, top):
        _reduction_part(tally, G, g_cyc(G), has_cycle, "cyc")
    out.append(tally.result())
    tally = _Tally("reductions/odd-path")
    for G in _graphs(1, top):
        for u, v in itertools.product(range(G.n), repeat=2):
            _reduction_part(tally, G, bipartite_double(G, u, v), lambda H: has_odd_path(H, u, v), "double", u=u, v=v)
    out.append(tally.result())
    tally = _Tally("reductions/bip")
    for G in _graphs(1, btop):
        _reduction_part(tally, G, g_bip(G), _non_bipartite, "bip")
    out.append(tally.result())
    tally = _Tally("reductions/even")
    for G in _graphs(1, top):
        _reduction_part(tally, G, g_even(G), _even_cycle_oracle, "even")
    out.append(tally.result())
    return out


def reductions_suite(nmax: int | None = None, seed: int = 0) -> SuiteResult:
    parts = reduction_suites(nmax, seed)
    bad = next((p for p in parts if not p.passed), None)
    return SuiteResult(
        "reductions",
        bad is None,
        sum(p.checked for p in parts),
        None if bad is None else {"part": bad.name, **bad.counterexample},
        {p.name: {"checked": p.checked, "failures": p.details.get("failures", 0)} for p in parts},
    )


def _small_problems(nmax: int = 3) -> list[STProblem]:
    return [STProblem(G, s, t) for G in _graphs(2, nmax) for s, t in itertools.combinations(range(G.n), 2)]


def _shift(P: STProblem, offset: int, N: int) -> STProblem:
    edges = tuple(
        Edge(e.u, e.v, e.label, e.binding if e.binding is ALWAYS else Literal(e.binding.var + offset, e.binding.negated))
        for e in P.graph.edges
    )
    return STProblem(LabeledGraph(P.graph.n, edges, N), P.s, P.t, P.provenance)


def _pairs(nmax: int = 3) -> Iterator[tuple[STProblem, STProblem, int]]:
    probs = _small_problems(nmax)
    for A, B in itertools.product(probs, repeat=2):
        N = A.N + B.N
        yield _shift(A, 0, N), _shift(B, A.N, N), N


def composition_suite(nmax: int | None = None, seed: int = 0) -> SuiteResult:
    """OR law for ``parallel``, AND law for ``series``, and the size of ``g_cyc``."""
    tally = _Tally("composition")
    for A, B, N in _pairs(3 if nmax is None else min(nmax, 3)):
        par, ser = parallel(A, B), series(A, B)
        rows = all_assignments(N)
        a = st_connected_batch(A.graph, A.s, A.t, rows)
        b = st_connected_batch(B.graph, B.s, B.t, rows)
        p = st_connected_batch(par.graph, par.s, par.t, rows)
        q = st_connected_batch(ser.graph, ser.s, ser.t, rows)
        for k, row in enumerate(rows):
            tally.check(p[k] == (a[k] or b[k]), lambda: _cx(par.graph, row, law="OR"))
            tally.check(q[k] == (a[k] and b[k]), lambda: _cx(ser.graph, row, law="AND"))
    for G in _graphs(1, 5 if nmax is None else nmax):
        P = g_cyc(G)
        n, m = G.n, G.m
        ok = P.graph.n == m * (n - 2) + 2 + m and P.graph.m == m * m
        tally.check(ok, lambda: _cx(G, None, vertices=P.graph.n, edges=P.graph.m))
    return tally.result()


# --- resistance and capacitance properties -------------------------------------------


def _flip_ups(x: Assignment) -> Iterator[Assignment]:
    for i, b in enumerate(x.bits):
        if b == 0:
            yield Assignment(x.bits[:i] + (1,) + x.bits[i + 1:])


def _st_tables(nmax: int, value: Callable[[STProblem, Assignment], object]) -> Iterator[tuple[STProblem, dict]]:
    for G in _graphs(2, nmax):
        xs = list(_rows(G.N))
        for s, t in itertools.combinations(range(G.n), 2):
            P = STProblem(G, s, t)
            yield P, {x: value(P, x) for x in xs}


def resistance_suite(nmax: int | None = None, seed: int = 0) -> SuiteResult:
    """P1 unit edge, P2 infinite iff disconnected, P3 series, P4 parallel, P5 monotone, P6 path bound."""
    top = 5 if nmax is None else nmax
    tally = _Tally("resistance")
    for binding in (Literal(0), ALWAYS):
        P = single_edge(binding, 1)
        tally.check(effective_resistance(P, "1") == 1, lambda: _cx(P.graph, "1", property="P1"))
    for A, B, N in _pairs(min(top, 3)):
        par, ser = parallel(A, B), series(A, B)
        for x in _rows(N):
            ra, rb = effective_resistance(A, x), effective_resistance(B, x)
            rs, rp = effective_resistance(ser, x), effective_resistance(par, x)
            tally.check(rs == _add(ra, rb), lambda: _cx(ser.graph, x, property="P3", R=rs, R_A=ra, R_B=rb))
            tally.check(rp == _inv(_add(_inv(ra), _inv(rb))),
                        lambda: _cx(par.graph, x, property="P4", R=rp, R_A=ra, R_B=rb))
    for P, table in _st_tables(top, effective_resistance):
        G = P.graph
        for x, r in table.items():
            H = P.realise(x)
            conn = nx.has_path(_nx(H), P.s, P.t)
            tally.check((r == INF) == (not conn), lambda: _cx(G, x, s=P.s, t=P.t, property="P2", R=r))
            for y in _flip_ups(x):
                tally.check(r >= table[y], lambda: _cx(G, x, s=P.s, t=P.t, property="P5", R=r, y=str(y), R_y=table[y]))
            if conn:
                d = nx.shortest_path_length(_nx(H), P.s, P.t)
                tally.check(r <= d, lambda: _cx(G, x, s=P.s, t=P.t, property="P6", R=r, distance=d))
    return tally.result()


def _absent_cut(P: STProblem, x: Assignment, restricted: bool) -> int:
    g = nx.Graph()
    g.add_nodes_from(range(P.graph.n))
    for e in P.graph.edges:
        if restricted and e.present(x.bits):
            g.add_edge(e.u, e.v)  # no capacity attribute: uncuttable
        else:
            g.add_edge(e.u, e.v, capacity=1)
    return nx.minimum_cut_value(g, P.s, P.t)


def capacitance_suite(nmax: int | None = None, seed: int = 0) -> SuiteResult:
    """C1 unit edge, C2 infinite iff connected, C3 series, C4 parallel, C5 monotone, C6 cut bound.

    The cut in C6 may only use absent edges; the plain edge cut of ``G``
    admits counterexamples, which are counted in ``details``.
    """
    top = 5 if nmax is None else nmax
    tally = _Tally("capacitance")
    P = single_edge(Literal(0), 1)
    tally.check(effective_capacitance(P, "0") == 1, lambda: _cx(P.graph, "0", property="C1"))
    for A, B, N in _pairs(min(top, 3)):
        par, ser = parallel(A, B), series(A, B)
        for x in _rows(N):
            ca, cb = effective_capacitance(A, x), effective_capacitance(B, x)
            cs, cp = effective_capacitance(ser, x), effective_capacitance(par, x)
            tally.check(cs == _inv(_add(_inv(ca), _inv(cb))),
                        lambda: _cx(ser.graph, x, property="C3", C=cs, C_A=ca, C_B=cb))
            tally.check(cp == _add(ca, cb), lambda: _cx(par.graph, x, property="C4", C=cp, C_A=ca, C_B=cb))
    plain_cut_exceptions = 0
    for P, table in _st_tables(top, effective_capacitance):
        G = P.graph
        for x, c in table.items():
            conn = nx.has_path(_nx(P.realise(x)), P.s, P.t)
            tally.check((c == INF) == conn, lambda: _cx(G, x, s=P.s, t=P.t, property="C2", C=c))
            for y in _flip_ups(x):
                tally.check(c <= table[y], lambda: _cx(G, x, s=P.s, t=P.t, property="C5", C=c, y=str(y), C_y=table[y]))
            if not conn:
                cut = _absent_cut(P, x, True)
                tally.check(c <= cut, lambda: _cx(G, x, s=P.s, t=P.t, property="C6", C=c, cut=cut))
                plain_cut_exceptions += c > _absent_cut(P, x, False)
    return tally.result(plain_cut_exceptions=plain_cut_exceptions)


# --- lemmas on K_n ---------------------------------------------------------------------


def capacitance_lemma_table(ns=(3, 4, 5)) -> dict[int, dict[int, tuple[Fraction, str]]]:
    """Per ``n`` and ``mu``, the largest ``C(g_cyc(K_n), x)`` over forests with at most ``mu`` edges."""
    out = {}
    for n in ns:
        G = complete_graph(n)
        P = g_cyc(G)
        exact: dict[int, tuple[Fraction, str]] = {}
        for x in _rows(G.N):
            H = instantiate(G, x)
            if has_cycle(H):
                continue
            c = effective_capacitance(P, x)
            if H.m not in exact or c > exact[H.m][0]:
                exact[H.m] = (c, str(x))
        best: dict[int, tuple[Fraction, str]] = {}
        run = None
        for mu in range(0, n):
            if mu in exact and (run is None or exact[mu][0] > run[0]):
                run = exact[mu]
            best[mu] = run
        out[n] = best
    return out


def capacitance_lemma_suite(nmax: int | None = None, seed: int = 0) -> SuiteResult:
    """``C <= c * n * mu**2`` on ``K_n`` for every forest promise ``mu >= 1``.

    ``c_n`` is the smallest constant that works for ``n``; the suite passes when
    the largest ``c_n`` is within twice the smallest.  ``full_forest`` reports the
    same ratio at ``mu = n - 1`` only.
    """
    ns = tuple(range(3, (5 if nmax is None else nmax) + 1))
    table = capacitance_lemma_table(ns)
    per_n, full, worst = {}, {}, {}
    checked = 0
    for n in ns:
        ratios = {mu: table[n][mu][0] / (n * mu * mu) for mu in range(1, n)}
        checked += len(ratios)
        mu_star = max(ratios, key=lambda mu: (ratios[mu], -mu))
        per_n[n] = ratios[mu_star]
        worst[n] = {"mu": mu_star, "C": fmt(table[n][mu_star][0]), "x": table[n][mu_star][1]}
        full[n] = ratios[n - 1]
    hi, lo = max(per_n.values()), min(per_n.values())
    passed = hi <= 2 * lo
    cx = None
    if not passed:
        n = max(per_n, key=per_n.get)
        cx = {"graph": graph_to_dict(complete_graph(n)), "x": worst[n]["x"], "mu": worst[n]["mu"],
              "C": worst[n]["C"], "reduction": "cyc"}
    details = {
        "c": float(hi),
        "c_n": {str(n): float(v) for n, v in per_n.items()},
        "worst": {str(n): w for n, w in worst.items()},
        "full_forest_c_n": {str(n): float(v) for n, v in full.items()},
        "full_forest_stable": max(full.values()) <= 2 * min(full.values()),
    }
    return SuiteResult("capacitance-lemma", passed, checked, cx, details)


def witness_lemma_suite(nmax: int | None = None, seed: int = 0) -> SuiteResult:
    """``approx_negative_witness(g_cyc(G), x) <= m - mu + m * mu`` for cyclic ``G(x)``."""
    tally = _Tally("witness-lemma")
    tight = Fraction(0)
    for G in _graphs(3, 5 if nmax is None else nmax):
        P = None
        for x in _rows(G.N):
            H = instantiate(G, x)
            if not has_cycle(H):
                continue
            P = P or g_cyc(G)
            w = approx_negative_witness(P, x)
            cap = G.m - H.m + G.m * H.m
            tight = max(tight, w / cap)
            tally.check(w <= cap, lambda: _cx(G, x, witness=w, bound=cap))
    return tally.result(max_ratio=float(tight))


# --- bounds -------------------------------------------------------------------------


def _witness_check(tally: _Tally, family: str, n: int) -> tuple:
    rep = family_bound(family, n)
    P, _ = family_problem(family, n)
    if rep.witness_R is not None:
        r = effective_resistance(P, rep.witness_R)
        tally.check(r == rep.max_finite_R, lambda: _cx(P.graph, rep.witness_R, family=family, R=r))
    if rep.witness_C is not None:
        c = effective_capacitance(P, rep.witness_C)
        tally.check(c == rep.max_finite_C, lambda: _cx(P.graph, rep.witness_C, family=family, C=c))
    return rep.max_finite_R, rep.max_finite_C


def bound_constants(ns) -> dict[str, dict[int, Fraction]]:
    """Squared fitted constants ``c_n**2`` per family (exact)."""
    out: dict[str, dict[int, Fraction]] = {"bip": {}, "even": {}, "cyc": {}}
    for family in ("bip", "even"):
        for n in ns:
            rep = family_bound(family, n)
            if rep.max_finite_R is None or rep.max_finite_C is None:
                continue
            m = n * (n - 1) // 2
            out[family][n] = rep.max_finite_R * rep.max_finite_C / (n * m)
    for row in cycle_grid(ns):
        n, r, mu = row["n"], row["r_min"], row["mu_max"]
        c2 = Fraction(row["R_max"]) * Fraction(row["C_max"]) * r / (mu * mu * n)
        out["cyc"][n] = max(out["cyc"].get(n, Fraction(0)), c2)
    return out


def bounds_suite(nmax: int | None = None, seed: int = 0) -> SuiteResult:
    """Fitted constants against ``sqrt(n m)`` and ``mu sqrt(n / r)``; each stable within 2x across ``n``."""
    ns = tuple(range(3, (6 if nmax is None else nmax) + 1))
    tally = _Tally("bounds")
    for family in ("cyc", "bip", "even", "odd-path"):
        for n in ns:
            _witness_check(tally, family, n)
    for n in ns:
        G = complete_graph(n)
        for x in _rows(G.N):
            H = instantiate(G, x)
            if not _even_cycle_oracle(H):
                tally.check(2 * H.m <= 3 * (n - 1), lambda: _cx(G, x, property="even-cycle-free edge count"))
    consts = bound_constants(ns)
    details = {}
    for family, c2 in consts.items():
        hi, lo = max(c2.values()), min(c2.values())
        stable = hi <= 4 * lo
        n_hi = max(c2, key=c2.get)
        tally.check(stable, lambda: {"family": family, "n": n_hi, "c_squared": fmt(hi)})
        details[family] = {"c": math.sqrt(hi), "c_n": {str(n): math.sqrt(v) for n, v in c2.items()},
                           "stable": stable}
    return tally.result(**details)


# --- span program and simulation ---------------------------------------------------------


def _figure2_path() -> LabeledGraph:
    return from_edges(4, [(0, 1), (1, 2), (2, 3)])


def simulation_instances() -> dict[str, STProblem]:
    return {
        "cyc(K3)": g_cyc(complete_graph(3)),
        "cyc(K4)": g_cyc(complete_graph(4)),
        "double(path4,0,3)": bipartite_double(_figure2_path(), 0, 3),
    }


def span_program_suite(nmax: int | None = None, seed: int = 0) -> SuiteResult:
    """Membership test vs connectivity for reductions of small graphs; monotone budget; register audit."""
    from .bounds import space_audit
    from .qsim import _in_span, build_span_program, decision_accuracy, load_config, register_qubits, _plan

    tally = _Tally("span-program")
    for G in _graphs(1, 4 if nmax is None else nmax):
        problems = [g_cyc(G), g_bip(G), g_even(G)]
        problems += [bipartite_double(G, u, v) for u, v in itertools.product(range(G.n), repeat=2)]
        for P in problems:
            if P.graph.n < 2:
                continue
            S = build_span_program(P, [], self_check=False)
            for x in _rows(P.N):
                got = _in_span(S.boundary[:, S.availability(x)], S.target)
                tally.check(got == P.connected(x), lambda: _cx(G, x, reduction=P.provenance, span=got))
    cfg = load_config()
    c = cfg["budget_constant"]
    accuracy = {}
    for name, P in simulation_instances().items():
        S = build_span_program(P)
        levels = [float(decision_accuracy(S, k * c)) for k in (0.5, 1, 2)]
        accuracy[name] = levels
        tally.check(levels[0] <= levels[1] <= levels[2], lambda: _cx(P.graph, None, accuracy=levels))
        _, bits, _ = _plan(S, c, cfg)
        q = register_qubits(S, bits)
        ok = q == math.ceil(math.log2(2 * P.graph.m + 1)) + bits and q <= space_audit(P)["log2_E"] + 2 + bits
        tally.check(ok, lambda: _cx(P.graph, None, qubits=q, phase_bits=bits))
    return tally.result(accuracy=accuracy)


def simulation_suite(nmax: int | None = None, seed: int = 0, reps: int = 25) -> SuiteResult:
    """Every assignment decided with error <= 1/3 over ``reps`` shots; witness sizes within 1e-9."""
    from .qsim import build_span_program, simulate_decision, witness_diagnostics

    tally = _Tally("simulation")
    worst = 0.0
    for P in simulation_instances().values():
        S = build_span_program(P)
        for k, x in enumerate(_rows(P.N)):
            try:
                out = simulate_decision(S, x, reps=reps, seed=seed + k)
            except SimulationTooLarge as exc:
                msg = str(exc)
                tally.check(False, lambda: _cx(P.graph, x, error=msg))
                continue
            worst = max(worst, out.error_estimate)
            tally.check(out.error_estimate <= 1 / 3 and out.decision == out.connected,
                        lambda: _cx(P.graph, x, s=P.s, t=P.t, error=out.error_estimate, decision=out.decision))
            pos, neg = witness_diagnostics(S, x)
            if out.connected:
                exact = effective_resistance(P, x)
                tally.check(abs(pos - float(exact)) <= 1e-9, lambda: _cx(P.graph, x, numeric=pos, exact=exact))
            else:
                exact = effective_capacitance(P, x)
                tally.check(abs(neg - float(exact)) <= 1e-9, lambda: _cx(P.graph, x, numeric=neg, exact=exact))
    return tally.result(worst_error=worst, reps=reps)


# --- figure fixtures ------------------------------------------------------------------------

FIGURES = ("fig1", "fig2", "fig3", "fig4")


def load_figure(name: str) -> dict:
    with resources.files("stconn").joinpath("fixtures", f"{name}.json").open() as fh:
        return json.load(fh)


def figure_problem(G: LabeledGraph, check: dict) -> STProblem:
    kind = check["reduction"]
    if kind == "ell":
        return g_ell(G, check["edge"])
    if kind == "even_ell":
        return g_even_ell(G, check["edge"])
    if kind == "double":
        return bipartite_double(G, check["u"], check["v"])
    return {"cyc": g_cyc, "bip": g_bip, "even": g_even}[kind](G)


def figures_suite(nmax: int | None = None, seed: int = 0) -> SuiteResult:
    tally = _Tally("figures")
    for name in FIGURES:
        fig = load_figure(name)
        G = graph_from_dict(fig["graph"])
        x = fig["x"]
        for check in fig["checks"]:
            got = figure_problem(G, check).connected(x)
            tally.check(got == check["connected"], lambda: _cx(G, x, figure=name, check=check, got=got))
    return tally.result()


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "graph-core": graph_core_suite,
    "circuit-rank": circuit_rank_suite,
    "spanning-tree": spanning_tree_suite,
    "appendix-a": appendix_a_suite,
    "edge-sum": edge_sum_suite,
    "flow-energy": flow_energy_suite,
    "composition": composition_suite,
    "reductions": reductions_suite,
    "resistance": resistance_suite,
    "capacitance": capacitance_suite,
    "capacitance-lemma": capacitance_lemma_suite,
    "witness-lemma": witness_lemma_suite,
    "bounds": bounds_suite,
    "span-program": span_program_suite,
    "simulation": simulation_suite,
    "figures": figures_suite,
}


def run_suite(name: str, nmax: int | None = None, seed: int = 0) -> list[SuiteResult]:
    if name == "all":
        return [fn(nmax=nmax, seed=seed) for fn in SUITES.values()]
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all") from None
    return [fn(nmax=nmax, seed=seed)]
