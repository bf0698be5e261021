import itertools
import math
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, strategies as st

from stconn import electrical as el
from stconn.compose import STProblem, g_cyc, g_minus, parallel, series, single_edge
from stconn.errors import PreconditionViolated
from stconn.graph import (
    ALWAYS,
    Edge,
    LabeledGraph,
    Literal,
    all_assignments,
    complete_graph,
    count_spanning_trees,
    count_spanning_trees_with_edge,
    cycle_graph,
    from_edges,
    has_cycle,
    instantiate,
    path_graph,
)
from stconn.verify import load_figure
from stconn.graph import graph_from_dict

# --- independent floating-point oracles -------------------------------------------------


def _laplacian(n, edges):
    L = np.zeros((n, n))
    for u, v in edges:
        L[u, u] += 1
        L[v, v] += 1
        L[u, v] -= 1
        L[v, u] -= 1
    return L


def pinv_resistance(n, edges, s, t):
    d = np.zeros(n)
    d[s], d[t] = 1, -1
    return float(d @ np.linalg.pinv(_laplacian(n, edges)) @ d)


def float_capacitance(P, x):
    H = P.realise(x)
    ref = nx.MultiGraph()
    ref.add_nodes_from(range(H.n))
    ref.add_edges_from(H.edges)
    cls = {}
    for k, comp in enumerate(nx.connected_components(ref)):
        for v in comp:
            cls[v] = k
    if cls[P.s] == cls[P.t]:
        return math.inf
    bits = tuple(int(b) for b in x)
    absent = [(cls[e.u], cls[e.v]) for e in P.graph.edges if not e.present(bits) and cls[e.u] != cls[e.v]]
    k = len(set(cls.values()))
    net = nx.MultiGraph(absent)
    net.add_nodes_from(range(k))
    if not nx.has_path(net, cls[P.s], cls[P.t]):
        return 0.0
    return 1 / pinv_resistance(k, absent, cls[P.s], cls[P.t])


def _dirichlet(n, edges, fixed):
    L = _laplacian(n, edges)
    free = [v for v in range(n) if v not in fixed]
    pot = np.zeros(n)
    for v, val in fixed.items():
        pot[v] = val
    if free:
        b = -L[np.ix_(free, list(fixed))] @ np.array([fixed[v] for v in fixed], dtype=float)
        sol, *_ = np.linalg.lstsq(L[np.ix_(free, free)], b, rcond=None)
        pot[free] = sol
    return pot


def float_witness(P, x):
    H = P.realise(x)
    ref = nx.MultiGraph(H.edges)
    ref.add_nodes_from(range(H.n))
    comp = nx.node_connected_component(ref, P.s)
    sub = sorted(comp)
    index = {v: i for i, v in enumerate(sub)}
    inner = _dirichlet(len(sub), [(index[u], index[v]) for u, v in H.edges if u in comp],
                       {index[P.s]: 1.0, index[P.t]: 0.0})
    fixed = {v: inner[index[v]] for v in sub}
    all_edges = [e.endpoints for e in P.graph.edges]
    pot = _dirichlet(P.graph.n, all_edges, fixed)
    return float(sum((pot[u] - pot[v]) ** 2 for u, v in all_edges))


@st.composite
def problems(draw, nmax=6):
    n = draw(st.integers(2, nmax))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, min_size=1, max_size=len(pairs)))
    N = draw(st.integers(1, 4))
    edges = tuple(Edge(u, v, i, Literal(draw(st.integers(0, N - 1)), draw(st.booleans())))
                  for i, (u, v) in enumerate(chosen))
    s, t = draw(st.sampled_from(pairs))
    x = "".join(draw(st.sampled_from("01")) for _ in range(N))
    return STProblem(LabeledGraph(n, edges, N), s, t), x


# --- resistance ------------------------------------------------------------------------


def test_resistance_examples():
    assert el.effective_resistance(single_edge(Literal(0), 1), "1") == 1
    assert el.effective_resistance(STProblem(path_graph(3), 0, 2), "11") == 2
    two = parallel(single_edge(ALWAYS, 0), single_edge(ALWAYS, 0))
    assert el.effective_resistance(two, "") == Fraction(1, 2)
    tri = STProblem(complete_graph(3), 0, 1)
    H = tri.realise("111")
    assert el.effective_resistance(tri, "111") == Fraction(2, 3)
    assert Fraction(count_spanning_trees_with_edge(H, 0), count_spanning_trees(H)) == Fraction(2, 3)


def test_disconnected_is_infinite():
    assert el.effective_resistance(STProblem(path_graph(3), 0, 2), "10") == el.INF


@given(problems())
def test_resistance_matches_pseudoinverse(case):
    P, x = case
    R = el.effective_resistance(P, x)
    if not P.connected(x):
        assert R == el.INF
        return
    assert float(R) == pytest.approx(pinv_resistance(P.graph.n, P.realise(x).edges, P.s, P.t), abs=1e-9)


@given(problems())
def test_unit_flow_energy_equals_resistance(case):
    P, x = case
    if P.connected(x):
        assert el.unit_flow_energy(P, x) == el.effective_resistance(P, x)
    else:
        with pytest.raises(PreconditionViolated):
            el.unit_flow_energy(P, x)


def test_unit_flow_examples():
    assert el.unit_flow_energy(single_edge(ALWAYS, 0), "") == 1
    two = parallel(single_edge(ALWAYS, 0), single_edge(ALWAYS, 0))
    assert el.unit_flow_energy(two, "") == Fraction(1, 2)


def test_figure1_cycle_graph_resistance():
    G = graph_from_dict(load_figure("fig1")["graph"])
    assert el.effective_resistance(g_cyc(G), "011011") == 1


def test_k4_full_resistance():
    # r = 3
    assert el.effective_resistance(g_cyc(complete_graph(4)), "111111") == Fraction(1, 3)


def test_edge_sums_on_cycle():
    H = instantiate(cycle_graph(5), "11111")
    assert el.edge_resistances(H) == [Fraction(4, 5)] * 5


def test_resistance_from_spanning_trees_on_component():
    H = instantiate(from_edges(5, [(0, 1), (1, 2), (0, 2), (3, 4)]), "1111")
    assert el.resistance_from_spanning_trees(H, 0) == Fraction(2, 3)
    assert el.resistance_from_spanning_trees(H, 3) == 1


# --- capacitance -----------------------------------------------------------------------


def test_capacitance_examples():
    one = single_edge(Literal(0), 1)
    assert el.effective_capacitance(one, "0") == 1
    assert el.effective_capacitance(one, "1") == el.INF
    assert el.effective_capacitance(series(one, one), "0") == Fraction(1, 2)
    assert el.effective_capacitance(parallel(one, one), "0") == 2


def test_capacitance_without_absent_path_is_zero():
    assert el.effective_capacitance(STProblem(LabeledGraph(2, (), 0), 0, 1), "") == 0


@given(problems())
def test_capacitance_matches_float_oracle(case):
    P, x = case
    C = el.effective_capacitance(P, x)
    want = float_capacitance(P, x)
    if want == math.inf:
        assert C == el.INF
    else:
        assert float(C) == pytest.approx(want, abs=1e-9)


def test_empty_forest_on_complete_graph():
    for n in (3, 4, 5):
        m = n * (n - 1) // 2
        assert el.effective_capacitance(g_cyc(complete_graph(n)), "0" * m) == Fraction(m * (n - 2), n)


def test_single_edge_forest_on_triangle():
    # two absent l: series(absent edge, unit cut) = 1/2 each; the present one: two absent edges in series
    assert el.effective_capacitance(g_cyc(complete_graph(3)), "100") == Fraction(3, 2)


def _absent_cut(P, x):
    ref = nx.Graph()
    ref.add_nodes_from(range(P.graph.n))
    bits = tuple(int(b) for b in x)
    for e in P.graph.edges:
        if e.present(bits):
            ref.add_edge(e.u, e.v)
        else:
            ref.add_edge(e.u, e.v, capacity=1)
    return nx.minimum_cut_value(ref, P.s, P.t)


@pytest.mark.parametrize("n", (3, 4, 5))
def test_forest_capacitance_bound(n):
    """C(g_cyc(K_n), x) <= (m - mu) + sum over present l of the absent-edge cut of G minus l."""
    G = complete_graph(n)
    P = g_cyc(G)
    for row in all_assignments(G.N):
        x = "".join(map(str, row))
        H = instantiate(G, x)
        if has_cycle(H):
            continue
        cut = sum(_absent_cut(g_minus(G, lab), x) for lab in H.labels)
        assert el.effective_capacitance(P, x) <= G.m - H.m + cut


# --- approximate negative witness ----------------------------------------------------------------


def test_witness_examples():
    assert el.approx_negative_witness(single_edge(ALWAYS, 0), "") == 1
    two = parallel(single_edge(Literal(0), 1), single_edge(Literal(0, True), 1))
    assert el.approx_negative_witness(two, "1") == 2


def test_witness_needs_connection():
    with pytest.raises(PreconditionViolated):
        el.approx_negative_witness(single_edge(Literal(0), 1), "0")


@given(problems())
def test_witness_matches_float_oracle(case):
    P, x = case
    if P.connected(x):
        assert float(el.approx_negative_witness(P, x)) == pytest.approx(float_witness(P, x), abs=1e-9)


def test_witness_lemma_k4():
    G = complete_graph(4)
    P = g_cyc(G)
    for row in all_assignments(6):
        H = instantiate(G, row)
        if has_cycle(H):
            assert el.approx_negative_witness(P, row) <= G.m - H.m + G.m * H.m


def test_witness_below_grid_search():
    # triangle plus an absent pendant edge: the exact minimum never exceeds any grid extension
    G = from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
    P = STProblem(G, 0, 1)
    x = "1110"
    exact = el.approx_negative_witness(P, x)
    pot = el.st_potential(P, x)
    grid = [Fraction(k, 8) for k in range(9)]
    best = min(sum((pot[u] - pot[v]) ** 2 for u, v in [(0, 1), (1, 2), (0, 2)]) + (pot[2] - y) ** 2 for y in grid)
    assert exact <= best
    assert exact == sum((pot[u] - pot[v]) ** 2 for u, v in [(0, 1), (1, 2), (0, 2)])


def test_figure1_witness():
    G = graph_from_dict(load_figure("fig1")["graph"])
    P = g_cyc(G)
    w = el.approx_negative_witness(P, "011011")
    assert float(w) == pytest.approx(float_witness(P, "011011"), abs=1e-9)
    assert w <= 6 - 4 + 6 * 4


def test_potential_zero_off_component():
    P = STProblem(from_edges(4, [(0, 1), (2, 3)]), 0, 1)
    assert el.st_potential(P, "11") == [1, 0, 0, 0]


# --- formatting --------------------------------------------------------------------------------


@given(st.fractions())
def test_fmt_round_trip(q):
    assert el.parse(el.fmt(q)) == q


def test_fmt_inf():
    assert el.fmt(el.INF) == "inf" and el.parse("inf") == el.INF
    assert el.fmt(Fraction(6, 4)) == "3/2" and el.fmt(Fraction(4)) == "4"
