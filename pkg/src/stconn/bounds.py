"""Query-bound formulas evaluated over promise sets, and scaling tables.

Maxima are exact; the reported bound is the bare ``sqrt(R_max * C_max)``
with no hidden constant.  Ties between assignments go to the
lexicographically smallest bitstring, so reports do not depend on scan order.

Promise sets built on ``K_n`` by :func:`promise_cycle`, :func:`promise_bipartite`
and :func:`promise_even_cycle` are unions of vertex-permutation orbits.  For
reductions of ``K_n`` the scan can then visit one assignment per orbit (the
smallest one), which is what makes ``n = 6, 7`` affordable.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator

import numpy as np

from . import _accel
from .compose import STProblem, bipartite_double, g_bip, g_cyc, g_even
from .electrical import approx_negative_witness, effective_capacitance, effective_resistance, fmt
from .errors import EmptyPromise, EnumerationCapExceeded, PromiseViolated
from .graph import (
    Assignment,
    all_assignments,
    circuit_rank,
    complete_graph,
    components,
    has_cycle,
    has_even_cycle,
    instantiate,
    is_bipartite_component,
    small_graphs,
)

DEFAULT_CAP = 1 << 24


def enumeration_cap() -> int:
    return int(os.environ.get("STCONN_ENUM_CAP", DEFAULT_CAP))


@dataclass(frozen=True)
class PromiseSet:
    """A set ``X`` of assignments, explicit or by membership predicate.

    ``classify`` (optional) says which side of the promise a member lies on
    (``True`` = the property holds).  ``orbit_n`` marks a set on ``K_n`` that
    is closed under vertex permutations.
    """

    N: int
    members: tuple[Assignment, ...] | None = None
    predicate: Callable[[Assignment], bool] | None = None
    classify: Callable[[Assignment], bool] | None = None
    description: str = ""
    orbit_n: int | None = None
    cap: int | None = None

    def __contains__(self, x) -> bool:
        x = x if isinstance(x, Assignment) else Assignment.parse(str(x))
        if len(x) != self.N:
            return False
        if self.members is not None:
            return x in self.members
        return self.predicate is None or self.predicate(x)

    def enumerate(self) -> Iterator[Assignment]:
        if self.members is not None:
            yield from sorted(self.members, key=str)
            return
        cap = self.cap if self.cap is not None else enumeration_cap()
        if (1 << self.N) > cap:
            raise EnumerationCapExceeded(f"2^{self.N} assignments exceed the cap {cap}")
        for row in all_assignments(self.N):
            x = Assignment(tuple(row))
            if self.predicate is None or self.predicate(x):
                yield x

    def sample(self, k: int, seed: int) -> list[Assignment]:
        """Up to ``k`` distinct members by rejection sampling (seeded)."""
        rng = np.random.default_rng(seed)
        out: set[Assignment] = set()
        tries = 0
        while len(out) < k and tries < 200 * k:
            tries += 1
            x = Assignment(tuple(rng.integers(0, 2, self.N)))
            if x in self:
                out.add(x)
        return sorted(out, key=str)


def explicit(members: Iterable, N: int | None = None, description: str = "explicit") -> PromiseSet:
    members = tuple(m if isinstance(m, Assignment) else Assignment.parse(str(m)) for m in members)
    if N is None:
        if not members:
            raise EmptyPromise("cannot infer N from an empty list")
        N = len(members[0])
    return PromiseSet(N, members=members, description=description)


def everything(N: int) -> PromiseSet:
    return PromiseSet(N, description="all")


# --- promise generators on K_n -------------------------------------------------

_KN = {}


def _kn(n):
    if n not in _KN:
        _KN[n] = complete_graph(n)
    return _KN[n]


def _realise(n, x):
    return instantiate(_kn(n), x)


def _is_connected(H):
    return len(set(components(H))) == 1


def promise_cycle(n: int, r_min: int, mu_max: int) -> PromiseSet:
    """Connected with circuit rank >= ``r_min``, or a forest with <= ``mu_max`` edges."""
    if n < 3 or r_min < 1 or r_min > (n - 1) * (n - 2) // 2 or mu_max < 0:
        raise EmptyPromise(f"infeasible cycle promise n={n}, r={r_min}, mu={mu_max}")

    def side(x):
        return has_cycle(_realise(n, x))

    def member(x):
        H = _realise(n, x)
        r = circuit_rank(H)
        if r == 0:
            return H.m <= mu_max
        return r >= r_min and _is_connected(H)

    return PromiseSet(
        n * (n - 1) // 2,
        predicate=member,
        classify=side,
        description=f"cycle(n={n},r>={r_min},mu<={mu_max})",
        orbit_n=n,
    )


def promise_bipartite(n: int) -> PromiseSet:
    """Every subgraph of ``K_n``; the positive side is the non-bipartite ones."""
    if n < 1:
        raise EmptyPromise("n must be positive")

    def side(x):
        H = _realise(n, x)
        return not all(is_bipartite_component(H, u) for u in range(n))

    return PromiseSet(n * (n - 1) // 2, classify=side, description=f"bipartite(n={n})", orbit_n=n)


def promise_even_cycle(n: int) -> PromiseSet:
    """Every subgraph of ``K_n``; the positive side has an even simple cycle.

    Even-cycle-free graphs have at most ``3(n-1)/2`` edges, which the
    negative side satisfies automatically.
    """
    if n < 1:
        raise EmptyPromise("n must be positive")

    def side(x):
        return has_even_cycle(_realise(n, x))

    return PromiseSet(n * (n - 1) // 2, classify=side, description=f"even-cycle(n={n})", orbit_n=n)


def promise_cyclic_sparse(n: int, mu_max: int) -> PromiseSet:
    """Subgraphs of ``K_n`` with a cycle and at most ``mu_max`` edges (estimation promise)."""

    def member(x):
        H = _realise(n, x)
        return H.m <= mu_max and has_cycle(H)

    return PromiseSet(n * (n - 1) // 2, predicate=member, description=f"cyclic(n={n},mu<={mu_max})", orbit_n=n)


# --- orbit enumeration -------------------------------------------------------


def _edge_perm_maps(n: int, perms: Iterable[tuple[int, ...]]) -> np.ndarray:
    pairs = list(itertools.combinations(range(n), 2))
    index = {p: i for i, p in enumerate(pairs)}
    rows = []
    for perm in perms:
        rows.append([index[tuple(sorted((perm[a], perm[b])))] for a, b in pairs])
    return np.array(rows, dtype=np.int64).reshape(len(rows), len(pairs))


def _code_to_bits(code: int, N: int) -> tuple[int, ...]:
    return tuple((code >> (N - 1 - j)) & 1 for j in range(N))


def orbit_representatives(n: int, fixed: tuple[int, ...] = (), *, backend=None) -> list[tuple[Assignment, int]]:
    """Smallest assignment of each orbit of ``K_n`` edge subsets, with orbit size.

    Orbits are under vertex permutations fixing ``fixed`` pointwise.  With no
    fixed vertices the classes come from the graph atlas (``n <= 7``);
    otherwise every assignment is canonicalised.
    """
    N = n * (n - 1) // 2
    movable = [v for v in range(n) if v not in fixed]
    perms = []
    for img in itertools.permutations(movable):
        perm = list(range(n))
        for a, b in zip(movable, img):
            perm[a] = b
        perms.append(tuple(perm))
    maps = _edge_perm_maps(n, perms)
    if not fixed and n <= 7:
        reps = []
        for G in small_graphs(n):
            bits = np.zeros(N, dtype=np.uint8)
            pairs = list(itertools.combinations(range(n), 2))
            for e in G.edges:
                bits[pairs.index(e.endpoints)] = 1
            reps.append(bits)
        bits = np.array(reps, dtype=np.uint8).reshape(len(reps), N)
        codes = _accel.min_orbit_codes(bits, maps, backend=backend)
        size = {}
        for b, code in zip(bits, codes):
            size[int(code)] = math.factorial(n) // _automorphisms(b, maps)
    else:
        if (1 << N) > enumeration_cap():
            raise EnumerationCapExceeded(f"2^{N} assignments exceed the cap")
        codes = _accel.min_orbit_codes(all_assignments(N), maps, backend=backend)
        uniq, counts = np.unique(codes, return_counts=True)
        size = {int(c): int(k) for c, k in zip(uniq, counts)}
    return [(Assignment(_code_to_bits(c, N)), size[c]) for c in sorted(size)]


def _automorphisms(bits: np.ndarray, maps: np.ndarray) -> int:
    permuted = np.zeros_like(maps, dtype=np.uint8)
    np.put_along_axis(permuted, maps, np.broadcast_to(bits, maps.shape), axis=1)
    return int((permuted == bits).all(axis=1).sum())


# --- reports ----------------------------------------------------------------


@dataclass
class QueryBoundReport:
    max_finite_R: Fraction | None
    max_finite_C: Fraction | None
    bound: float
    witness_R: str | None
    witness_C: str | None
    promise: str
    scanned: int = 0
    sampled: bool = False
    seed: int | None = None

    def to_dict(self) -> dict:
        return {
            "R_max": None if self.max_finite_R is None else fmt(self.max_finite_R),
            "C_max": None if self.max_finite_C is None else fmt(self.max_finite_C),
            "bound": self.bound,
            "witness_R": self.witness_R,
            "witness_C": self.witness_C,
            "promise": self.promise,
            "scanned": self.scanned,
            "sampled": self.sampled,
            "seed": self.seed,
        }


@dataclass
class EstimationBoundReport:
    epsilon: float
    R_value: Fraction
    max_neg_witness: Fraction
    bound: float
    witness_R: str
    witness_neg: str
    promise: str

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "R": fmt(self.R_value),
            "neg_witness_max": fmt(self.max_neg_witness),
            "bound": self.bound,
            "witness_R": self.witness_R,
            "witness_neg": self.witness_neg,
            "promise": self.promise,
        }


def _better(value, witness, best, best_witness) -> bool:
    if best is None or value > best:
        return True
    return value == best and str(witness) < str(best_witness)


def _candidates(X: PromiseSet, symmetric: bool, fixed: tuple[int, ...], sample: int | None, seed: int):
    if symmetric:
        if X.orbit_n is None:
            raise ValueError("symmetric scan needs a promise set closed under permutations")
        return [x for x, _ in orbit_representatives(X.orbit_n, fixed) if x in X], False
    cap = X.cap if X.cap is not None else enumeration_cap()
    if X.members is None and (1 << X.N) > cap:
        if sample is None:
            raise EnumerationCapExceeded(f"2^{X.N} assignments exceed the cap {cap}")
        return X.sample(sample, seed), True
    return list(X.enumerate()), False


def query_bound(
    P: STProblem,
    X: PromiseSet,
    *,
    symmetric: bool = False,
    fixed: tuple[int, ...] = (),
    sample: int | None = None,
    seed: int = 0,
) -> QueryBoundReport:
    """Maxima of finite ``R`` and finite ``C`` over ``X`` and ``sqrt(R_max * C_max)``.

    ``symmetric=True`` asserts that ``R`` and ``C`` of ``P`` are invariant
    under the vertex permutations of ``K_n`` fixing ``fixed``; one assignment
    per orbit is then evaluated.  ``sample`` enables seeded sampling once
    ``2**N`` exceeds the enumeration cap.
    """
    xs, sampled = _candidates(X, symmetric, fixed, sample, seed)
    r_best = c_best = None
    r_wit = c_wit = None
    for x in xs:
        if P.connected(x):
            r = effective_resistance(P, x)
            if _better(r, x, r_best, r_wit):
                r_best, r_wit = r, x
        else:
            c = effective_capacitance(P, x)
            if _better(c, x, c_best, c_wit):
                c_best, c_wit = c, x
    bound = math.sqrt((r_best or 0) * (c_best or 0))
    return QueryBoundReport(
        r_best,
        c_best,
        bound,
        None if r_wit is None else str(r_wit),
        None if c_wit is None else str(c_wit),
        X.description,
        len(xs),
        sampled,
        seed if sampled else None,
    )


def estimation_bound(
    P: STProblem, X: PromiseSet, epsilon: float, *, symmetric: bool = False, fixed: tuple[int, ...] = ()
) -> EstimationBoundReport:
    """``epsilon**-1.5 * sqrt(max R * max approx_negative_witness)`` over ``X``."""
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    xs, _ = _candidates(X, symmetric, fixed, None, 0)
    r_best = w_best = None
    r_wit = w_wit = None
    for x in xs:
        if not P.connected(x):
            raise PromiseViolated(f"s and t disconnected for x={x}")
        r = effective_resistance(P, x)
        w = approx_negative_witness(P, x)
        if _better(r, x, r_best, r_wit):
            r_best, r_wit = r, x
        if _better(w, x, w_best, w_wit):
            w_best, w_wit = w, x
    if r_best is None:
        raise EmptyPromise("promise set is empty")
    bound = epsilon ** -1.5 * math.sqrt(r_best * w_best)
    return EstimationBoundReport(epsilon, r_best, w_best, bound, str(r_wit), str(w_wit), X.description)


# --- reduction families and scaling -----------------------------------------

FAMILIES = ("cyc", "bip", "even", "odd-path")


def family_problem(family: str, n: int) -> tuple[STProblem, tuple[int, ...]]:
    """Reduction graph on ``K_n`` and the vertices its symmetry must fix."""
    G = _kn(n)
    if family == "cyc":
        return g_cyc(G), ()
    if family == "bip":
        return g_bip(G), ()
    if family == "even":
        return g_even(G), ()
    if family == "odd-path":
        return bipartite_double(G, 0, 1), (0, 1)
    raise ValueError(f"unknown family {family!r}")


def family_promise(family: str, n: int, r_min: int = 1, mu_max: int | None = None) -> PromiseSet:
    if family == "cyc":
        return promise_cycle(n, r_min, n - 1 if mu_max is None else mu_max)
    if family == "bip":
        return promise_bipartite(n)
    if family == "even":
        return promise_even_cycle(n)
    if family == "odd-path":
        return PromiseSet(n * (n - 1) // 2, description=f"odd-path(n={n})", orbit_n=n)
    raise ValueError(f"unknown family {family!r}")


def reference_curve(family: str, n: int, r_min: int = 1, mu_max: int | None = None) -> float:
    if family == "cyc":
        mu = n - 1 if mu_max is None else mu_max
        return mu * math.sqrt(n / r_min)
    m = n * (n - 1) // 2
    return math.sqrt(n * m)


def family_bound(family: str, n: int, r_min: int = 1, mu_max: int | None = None) -> QueryBoundReport:
    P, fixed = family_problem(family, n)
    X = family_promise(family, n, r_min, mu_max)
    return query_bound(P, X, symmetric=True, fixed=fixed)


def space_audit(P: STProblem) -> dict:
    """Register sizes ``ceil(log2 |E|)``, ``ceil(log2 |V|)`` of the reduction graph."""
    e_bits = math.ceil(math.log2(max(P.graph.m, 1)))
    v_bits = math.ceil(math.log2(max(P.graph.n, 1)))
    return {"log2_E": e_bits, "log2_V": v_bits, "space_registers": max(e_bits, v_bits)}


SCALING_HEADER = ["family", "n", "m", "r_min", "mu_max", "R_max", "C_max", "bound", "reference", "ratio",
                  "log2_E", "log2_V", "space_registers"]


def scaling_table(
    family: str, n_range: Iterable[int], r_min: int = 1, mu_max: int | None = None
) -> list[dict]:
    """One row per ``n``; ``ratio = bound / reference``.

    For ``cyc`` the default promise is the worst case ``r = 1``,
    ``mu = n - 1``; an explicit ``mu_max`` is clamped to ``n - 1``.
    """
    rows = []
    for n in n_range:
        mu = None if mu_max is None else min(mu_max, n - 1)
        rep = family_bound(family, n, r_min, mu)
        P, _ = family_problem(family, n)
        ref = reference_curve(family, n, r_min, mu)
        rows.append({
            "family": family,
            "n": n,
            "m": n * (n - 1) // 2,
            "r_min": r_min if family == "cyc" else "",
            "mu_max": (n - 1 if mu is None else mu) if family == "cyc" else "",
            "R_max": "" if rep.max_finite_R is None else fmt(rep.max_finite_R),
            "C_max": "" if rep.max_finite_C is None else fmt(rep.max_finite_C),
            "bound": f"{rep.bound:.6f}",
            "reference": f"{ref:.6f}",
            "ratio": f"{rep.bound / ref:.6f}",
            **space_audit(P),
        })
    return rows


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SCALING_HEADER, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def cycle_grid(n_range: Iterable[int]) -> list[dict]:
    """Cycle-detection bound over every feasible ``(r_min, mu_max)`` per ``n``.

    Each orbit is evaluated once per ``n``; the grid then only re-aggregates.
    """
    out = []
    for n in n_range:
        P, _ = family_problem("cyc", n)
        values = []
        for x, _ in orbit_representatives(n):
            H = _realise(n, x)
            r = circuit_rank(H)
            if r == 0:
                values.append((x, 0, H.m, False, effective_capacitance(P, x)))
            elif _is_connected(H):
                values.append((x, r, H.m, True, effective_resistance(P, x)))
        for r_min in range(1, (n - 1) * (n - 2) // 2 + 1):
            for mu in range(1, n):
                R = max((v for _, r, _, pos, v in values if pos and r >= r_min), default=None)
                C = max((v for _, r, m_, pos, v in values if not pos and m_ <= mu), default=None)
                if R is None or C is None:
                    continue
                bound = math.sqrt(R * C)
                ref = mu * math.sqrt(n / r_min)
                out.append({"n": n, "r_min": r_min, "mu_max": mu, "R_max": R, "C_max": C,
                            "bound": bound, "reference": ref, "ratio": bound / ref})
    return out


def fitted_constant(rows: Iterable[dict], key: str = "ratio") -> float:
    return max(float(r[key]) for r in rows)


__all__ = [
    "EstimationBoundReport",
    "PromiseSet",
    "QueryBoundReport",
    "cycle_grid",
    "estimation_bound",
    "everything",
    "explicit",
    "family_bound",
    "orbit_representatives",
    "promise_bipartite",
    "promise_cycle",
    "promise_cyclic_sparse",
    "promise_even_cycle",
    "query_bound",
    "scaling_table",
]
