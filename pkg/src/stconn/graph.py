"""Labeled graphs, the literal input model, spanning trees and decision oracles.

A :class:`LabeledGraph` is the known graph ``G``; each edge is bound to a
literal ``x_i`` / ``not x_i`` or is always present.  ``instantiate`` realises
the subgraph ``G(x)`` as a :class:`SimpleGraph`.  The oracles at the bottom of
the module are classical ground truth for every reduction.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import _accel
from .errors import InvalidAssignment, InvalidGraph, UnknownEdge, UnknownVertex
from .exact import bareiss_det


@dataclass(frozen=True)
class Literal:
    var: int
    negated: bool = False

    def evaluate(self, bits: Sequence[int]) -> bool:
        return bool(bits[self.var]) != self.negated

    def __str__(self) -> str:
        return f"{'~' if self.negated else ''}x{self.var}"


class AlwaysPresent:
    """Binding for scaffold edges that exist in ``G(x)`` for every ``x``."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ALWAYS"

    def __reduce__(self):
        return (AlwaysPresent, ())


ALWAYS = AlwaysPresent()
Binding = Literal | AlwaysPresent


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    label: int
    binding: Binding = ALWAYS

    def __post_init__(self):
        if self.u == self.v:
            raise InvalidGraph(f"self-loop on vertex {self.u}")
        if self.u > self.v:
            a, b = self.v, self.u
            object.__setattr__(self, "u", a)
            object.__setattr__(self, "v", b)

    @property
    def endpoints(self) -> tuple[int, int]:
        return (self.u, self.v)

    def present(self, bits: Sequence[int]) -> bool:
        return True if self.binding is ALWAYS else self.binding.evaluate(bits)


@dataclass(frozen=True)
class LabeledGraph:
    n: int
    edges: tuple[Edge, ...]
    N: int = 0

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))
        labels = set()
        for e in self.edges:
            if not (0 <= e.u < self.n and 0 <= e.v < self.n):
                raise InvalidGraph(f"edge {e.label} has endpoint outside [0, {self.n})")
            if e.label in labels:
                raise InvalidGraph(f"duplicate edge label {e.label}")
            labels.add(e.label)
            if isinstance(e.binding, Literal) and not 0 <= e.binding.var < self.N:
                raise InvalidGraph(f"edge {e.label} uses variable {e.binding.var} >= N={self.N}")

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge(self, label: int) -> Edge:
        for e in self.edges:
            if e.label == label:
                return e
        raise UnknownEdge(f"no edge labeled {label}")

    def check_vertex(self, *vs: int) -> None:
        for v in vs:
            if not 0 <= v < self.n:
                raise UnknownVertex(f"vertex {v} not in [0, {self.n})")

    def without(self, label: int) -> "LabeledGraph":
        self.edge(label)
        return LabeledGraph(self.n, tuple(e for e in self.edges if e.label != label), self.N)

    def endpoint_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        eu = np.array([e.u for e in self.edges], dtype=np.int64)
        ev = np.array([e.v for e in self.edges], dtype=np.int64)
        return eu, ev

    def presence(self, bits: np.ndarray) -> np.ndarray:
        """Edge-presence matrix ``(B, m)`` for a batch of assignments ``(B, N)``."""
        bits = np.asarray(bits, dtype=np.uint8)
        bits = bits.reshape(1, -1) if bits.ndim == 1 else bits
        out = np.ones((bits.shape[0], self.m), dtype=np.bool_)
        for j, e in enumerate(self.edges):
            if isinstance(e.binding, Literal):
                col = bits[:, e.binding.var].astype(np.bool_)
                out[:, j] = ~col if e.binding.negated else col
        return out


@dataclass(frozen=True)
class Assignment:
    bits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "bits", tuple(int(b) for b in self.bits))
        if any(b not in (0, 1) for b in self.bits):
            raise InvalidAssignment("bits must be 0 or 1")

    @classmethod
    def parse(cls, text: str) -> "Assignment":
        text = text.strip()
        if any(c not in "01" for c in text):
            raise InvalidAssignment(f"not a bitstring: {text!r}")
        return cls(tuple(int(c) for c in text))

    def __len__(self) -> int:
        return len(self.bits)

    def __getitem__(self, i: int) -> int:
        return self.bits[i]

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


def as_assignment(x) -> Assignment:
    if isinstance(x, Assignment):
        return x
    if isinstance(x, str):
        return Assignment.parse(x)
    return Assignment(tuple(x))


def all_assignments(N: int) -> np.ndarray:
    """All ``2**N`` bit rows in lexicographic order (``x_0`` most significant)."""
    codes = np.arange(1 << N, dtype=np.int64)
    shifts = np.arange(N - 1, -1, -1, dtype=np.int64)
    return ((codes[:, None] >> shifts) & 1).astype(np.uint8)


@dataclass(frozen=True)
class SimpleGraph:
    """A realised graph ``G(x)``: vertex count plus labeled edge list.

    Parallel edges can occur in graphs produced by composition; they carry
    distinct labels.
    """

    n: int
    edges: tuple[tuple[int, int], ...] = ()
    labels: tuple[int, ...] = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((min(u, v), max(u, v)) for u, v in self.edges))
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(range(len(self.edges))))
        else:
            object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.labels) != len(self.edges):
            raise InvalidGraph("one label per edge required")
        for u, v in self.edges:
            if u == v or not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidGraph(f"bad edge {(u, v)}")

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def edge_index(self, label: int) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownEdge(f"no edge labeled {label}") from None

    def check_vertex(self, *vs: int) -> None:
        for v in vs:
            if not 0 <= v < self.n:
                raise UnknownVertex(f"vertex {v} not in [0, {self.n})")


def instantiate(G: LabeledGraph, x) -> SimpleGraph:
    x = as_assignment(x)
    if len(x) != G.N:
        raise InvalidAssignment(f"assignment has length {len(x)}, graph needs {G.N}")
    kept = [e for e in G.edges if e.present(x.bits)]
    return SimpleGraph(G.n, tuple(e.endpoints for e in kept), tuple(e.label for e in kept))


# --- constructors -----------------------------------------------------------


def from_edges(n: int, pairs: Iterable[tuple[int, int]], labels: Iterable[int] | None = None) -> LabeledGraph:
    """Base graph whose ``i``-th edge is bound to the positive literal ``x_i``."""
    pairs = list(pairs)
    labels = list(range(len(pairs))) if labels is None else list(labels)
    edges = tuple(Edge(u, v, lab, Literal(i)) for i, ((u, v), lab) in enumerate(zip(pairs, labels)))
    return LabeledGraph(n, edges, len(pairs))


def complete_graph(n: int) -> LabeledGraph:
    return from_edges(n, itertools.combinations(range(n), 2))


def path_graph(n: int) -> LabeledGraph:
    return from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> LabeledGraph:
    return from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def small_graphs(n: int, *, connected: bool = False) -> Iterator[LabeledGraph]:
    """Every graph on exactly ``n`` vertices up to isomorphism (``n <= 7``)."""
    if not 0 <= n <= 7:
        raise ValueError("graph atlas covers n <= 7")
    import networkx as nx

    for g in nx.graph_atlas_g():
        if g.number_of_nodes() != n:
            continue
        if connected and (n == 0 or not nx.is_connected(g)):
            continue
        yield from_edges(n, sorted(tuple(sorted(e)) for e in g.edges()))


# --- serialisation ----------------------------------------------------------


def graph_to_dict(G: LabeledGraph) -> dict:
    edges = []
    for e in G.edges:
        lit = "always" if e.binding is ALWAYS else {"var": e.binding.var, "neg": e.binding.negated}
        edges.append({"u": e.u, "v": e.v, "label": e.label, "lit": lit})
    return {"n": G.n, "N": G.N, "edges": edges}


def graph_from_dict(data: dict) -> LabeledGraph:
    try:
        edges = []
        for item in data["edges"]:
            lit = item.get("lit", "always")
            if lit == "always":
                binding = ALWAYS
            else:
                binding = Literal(int(lit["var"]), bool(lit.get("neg", False)))
            edges.append(Edge(int(item["u"]), int(item["v"]), int(item["label"]), binding))
        return LabeledGraph(int(data["n"]), tuple(edges), int(data.get("N", 0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidGraph(f"malformed graph JSON: {exc}") from exc


def dumps_graph(G: LabeledGraph, **extra) -> str:
    return json.dumps({**extra, **graph_to_dict(G)}, indent=2, sort_keys=False)


def to_dot(G: LabeledGraph, x=None, *, name: str = "G", s: int | None = None, t: int | None = None) -> str:
    """DOT text; under an assignment, present edges are solid and absent ones dashed."""
    bits = None if x is None else as_assignment(x).bits
    lines = [f"graph {name} {{"]
    for v in range(G.n):
        attrs = []
        if v == s:
            attrs.append('label="s"')
        elif v == t:
            attrs.append('label="t"')
        lines.append(f"  {v}" + (f" [{', '.join(attrs)}]" if attrs else "") + ";")
    for e in G.edges:
        lit = "always" if e.binding is ALWAYS else str(e.binding)
        style = "solid" if bits is None or e.present(bits) else "dashed"
        lines.append(f'  {e.u} -- {e.v} [label="{e.label}:{lit}", style={style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- counting ---------------------------------------------------------------


def components(H: SimpleGraph) -> list[int]:
    """Component label (smallest vertex id) of every vertex."""
    parent = list(range(H.n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for u, v in H.edges:
        a, b = find(u), find(v)
        if a != b:
            parent[max(a, b)] = min(a, b)
    return [find(i) for i in range(H.n)]


def circuit_rank(H: SimpleGraph) -> int:
    return H.m - H.n + len(set(components(H)))


def _laplacian(n: int, edges: Sequence[tuple[int, int]]) -> list[list[int]]:
    L = [[0] * n for _ in range(n)]
    for u, v in edges:
        L[u][u] += 1
        L[v][v] += 1
        L[u][v] -= 1
        L[v][u] -= 1
    return L


def count_spanning_trees(H: SimpleGraph) -> int:
    """Number of spanning trees by the Matrix-Tree theorem; 0 if disconnected."""
    if H.n <= 1:
        return 1
    if len(set(components(H))) > 1:
        return 0
    L = _laplacian(H.n, H.edges)
    return bareiss_det([row[1:] for row in L[1:]])


def contract(H: SimpleGraph, label: int) -> SimpleGraph:
    """``H / label``: merge the edge's endpoints, dropping resulting loops."""
    a, b = H.edges[H.edge_index(label)]
    remap = [i if i < b else i - 1 for i in range(H.n)]
    remap[b] = remap[a]
    edges, labels = [], []
    for (u, v), lab in zip(H.edges, H.labels):
        u2, v2 = remap[u], remap[v]
        if u2 != v2:
            edges.append((u2, v2))
            labels.append(lab)
    return SimpleGraph(H.n - 1, tuple(edges), tuple(labels))


def delete(H: SimpleGraph, label: int) -> SimpleGraph:
    i = H.edge_index(label)
    return SimpleGraph(H.n, H.edges[:i] + H.edges[i + 1:], H.labels[:i] + H.labels[i + 1:])


def count_spanning_trees_with_edge(H: SimpleGraph, label: int) -> int:
    return count_spanning_trees(contract(H, label))


# --- oracles ----------------------------------------------------------------


def is_st_connected(H: SimpleGraph, s: int, t: int) -> bool:
    H.check_vertex(s, t)
    comp = components(H)
    return comp[s] == comp[t]


def has_cycle(H: SimpleGraph) -> bool:
    return circuit_rank(H) > 0


def _parity_reach(H: SimpleGraph, u: int) -> set[tuple[int, int]]:
    adj = H.adjacency()
    seen = {(u, 0)}
    todo = [(u, 0)]
    while todo:
        a, p = todo.pop()
        for b in adj[a]:
            state = (b, 1 - p)
            if state not in seen:
                seen.add(state)
                todo.append(state)
    return seen


def has_odd_path(H: SimpleGraph, u: int, v: int) -> bool:
    """Odd-length walk from ``u`` to ``v`` (vertices may repeat)."""
    H.check_vertex(u, v)
    return (v, 1) in _parity_reach(H, u)


def is_bipartite_component(H: SimpleGraph, u: int) -> bool:
    """Two-colour the component of ``u`` by BFS."""
    H.check_vertex(u)
    adj = H.adjacency()
    colour = {u: 0}
    todo = [u]
    while todo:
        a = todo.pop()
        for b in adj[a]:
            if b not in colour:
                colour[b] = 1 - colour[a]
                todo.append(b)
            elif colour[b] == colour[a]:
                return False
    return True


def biconnected_blocks(H: SimpleGraph) -> list[list[int]]:
    """Edge-index sets of the blocks (Hopcroft-Tarjan, iterative)."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(H.n)]
    for i, (u, v) in enumerate(H.edges):
        adj[u].append((v, i))
        adj[v].append((u, i))
    disc = [-1] * H.n
    low = [0] * H.n
    blocks: list[list[int]] = []
    estack: list[int] = []
    clock = 0
    for root in range(H.n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = clock
        clock += 1
        stack = [(root, -1, iter(adj[root]))]
        while stack:
            v, via, it = stack[-1]
            advanced = False
            for w, i in it:
                if i == via:
                    continue
                if disc[w] == -1:
                    estack.append(i)
                    disc[w] = low[w] = clock
                    clock += 1
                    stack.append((w, i, iter(adj[w])))
                    advanced = True
                    break
                if disc[w] < disc[v]:
                    estack.append(i)
                    low[v] = min(low[v], disc[w])
            if advanced:
                continue
            stack.pop()
            if stack:
                p = stack[-1][0]
                low[p] = min(low[p], low[v])
                if low[v] >= disc[p]:
                    block = []
                    while True:
                        i = estack.pop()
                        block.append(i)
                        if i == via:
                            break
                    blocks.append(sorted(block))
    return blocks


def _block_vertices(H: SimpleGraph, block: list[int]) -> set[int]:
    return {w for i in block for w in H.edges[i]}


def has_even_cycle(H: SimpleGraph) -> bool:
    """Whether some simple cycle has even length.

    A block that is neither a bridge nor a single cycle contains a theta
    subgraph, and two of its three paths share parity.
    """
    for block in biconnected_blocks(H):
        if len(block) < 2:
            continue
        nv = len(_block_vertices(H, block))
        if len(block) != nv or nv % 2 == 0:
            return True
    return False


def is_cactus(H: SimpleGraph) -> bool:
    """Connected, and every block is a bridge or a simple cycle."""
    if H.n == 0 or len(set(components(H))) != 1:
        return False
    return all(
        len(block) == 1 or len(block) == len(_block_vertices(H, block)) for block in biconnected_blocks(H)
    )


def simple_cycles(H: SimpleGraph) -> list[tuple[int, ...]]:
    """All simple cycles as sorted edge-index tuples (exponential; tiny graphs only)."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(H.n)]
    for i, (u, v) in enumerate(H.edges):
        adj[u].append((v, i))
        adj[v].append((u, i))
    found: set[tuple[int, ...]] = set()
    for start in range(H.n):
        # cycles whose smallest vertex is ``start``
        stack = [(start, (start,), ())]
        while stack:
            v, path, used = stack.pop()
            for w, i in adj[v]:
                if i in used or w < start:
                    continue
                if w == start:
                    found.add(tuple(sorted(used + (i,))))
                elif w not in path:
                    stack.append((w, path + (w,), used + (i,)))
    return sorted(found)


def st_connected_batch(G: LabeledGraph, s: int, t: int, bits: np.ndarray, *, backend=None) -> np.ndarray:
    """Vectorised st-connectivity of ``G(x)`` for each row of ``bits``."""
    eu, ev = G.endpoint_arrays()
    labels = _accel.component_labels(G.n, eu, ev, G.presence(bits), backend=backend)
    return labels[:, s] == labels[:, t]
