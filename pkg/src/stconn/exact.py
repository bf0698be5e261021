"""Exact linear algebra over the rationals.

Dense routines (Bareiss determinant, Gauss-Jordan solve) serve spanning-tree
counts and the mesh-current cross-check.  The sparse routines eliminate
vertices of a weighted graph one at a time (Schur complement of the
Laplacian, i.e. star-mesh reduction) and are what the electrical module runs
on every instance.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Number = int | Fraction


def bareiss_det(matrix: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix by fraction-free elimination."""
    a = [list(map(int, row)) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            rowi = a[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * akk - aik * rowk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def solve_rational(a: Sequence[Sequence[Number]], b: Sequence[Number]) -> list[Fraction]:
    """Solve ``a @ x = b`` exactly; ``a`` must be square and nonsingular."""
    n = len(a)
    m = [[Fraction(v) for v in row] + [Fraction(b[i])] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        pivot_row = [v * inv for v in m[col]]
        m[col] = pivot_row
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                row = m[r]
                m[r] = [row[j] - f * pivot_row[j] for j in range(n + 1)]
    return [m[i][n] for i in range(n)]


def _adjacency(n: int, edges: Iterable[tuple[int, int, Number]]) -> list[dict[int, Fraction]]:
    adj: list[dict[int, Fraction]] = [dict() for _ in range(n)]
    for u, v, w in edges:
        if u == v or w == 0:
            continue
        w = Fraction(w)
        adj[u][v] = adj[u].get(v, 0) + w
        adj[v][u] = adj[v].get(u, 0) + w
    return adj


def _eliminate(adj: list[dict[int, Fraction]], v: int) -> tuple[dict[int, Fraction], Fraction]:
    nbrs = adj[v]
    adj[v] = {}
    total = sum(nbrs.values(), Fraction(0))
    items = list(nbrs.items())
    for i, _ in items:
        del adj[i][v]
    if total:
        for a in range(len(items)):
            i, ci = items[a]
            row = adj[i]
            for b in range(a + 1, len(items)):
                j, cj = items[b]
                w = ci * cj / total
                row[j] = row.get(j, 0) + w
                adj[j][i] = adj[j].get(i, 0) + w
    return nbrs, total


def _min_degree_order(adj: list[dict[int, Fraction]], free: set[int]):
    while free:
        v = min(free, key=lambda u: (len(adj[u]), u))
        free.discard(v)
        yield v


def effective_conductance(n: int, edges: Iterable[tuple[int, int, Number]], s: int, t: int) -> Fraction:
    """Effective conductance between ``s`` and ``t`` of a weighted multigraph.

    Zero when ``s`` and ``t`` lie in different components.  Self-loops are
    ignored and parallel edges add.
    """
    if s == t:
        raise ValueError("s and t must differ")
    adj = _adjacency(n, edges)
    reach = _component(adj, s)
    if t not in reach:
        return Fraction(0)
    for v in _min_degree_order(adj, reach - {s, t}):
        _eliminate(adj, v)
    return adj[s].get(t, Fraction(0))


def harmonic_extension(
    n: int, edges: Iterable[tuple[int, int, Number]], fixed: Mapping[int, Number]
) -> list[Fraction]:
    """Energy-minimising potential with the given boundary values.

    Minimises ``sum w (p[u] - p[v])**2`` over potentials agreeing with
    ``fixed``.  Components that touch no fixed vertex get potential zero.
    """
    adj = _adjacency(n, edges)
    stack = []
    for v in _min_degree_order(adj, set(range(n)) - set(fixed)):
        stack.append((v, *_eliminate(adj, v)))
    pot = [Fraction(0)] * n
    for v, val in fixed.items():
        pot[v] = Fraction(val)
    for v, nbrs, total in reversed(stack):
        if total:
            pot[v] = sum((c * pot[i] for i, c in nbrs.items()), Fraction(0)) / total
    return pot


def energy(edges: Iterable[tuple[int, int, Number]], pot: Sequence[Fraction]) -> Fraction:
    return sum((Fraction(w) * (pot[u] - pot[v]) ** 2 for u, v, w in edges), Fraction(0))


def _component(adj: list[dict[int, Fraction]], root: int) -> set[int]:
    seen = {root}
    todo = [root]
    while todo:
        u = todo.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                todo.append(v)
    return seen
