"""Dense simulation of the span-program algorithm for st-connectivity.

The span program has one column per edge direction: edge ``{u, v}``
contributes ``(e_u - e_v) / sqrt(2)`` and its negation, so the minimal
positive witness has squared norm ``R_{s,t}`` and the minimal negative
witness has energy ``C_{s,t}``.  The algorithm prepends a target slot
``|0>`` scaled by ``1/alpha`` with ``alpha**2 = positive_weight * R_max``,
then runs phase estimation of

    U = (2 Pi_x - I)(2 Lambda - I)

on ``|0>``, where ``Lambda`` projects onto the kernel of the augmented
boundary map and ``Pi_x`` onto the target slot plus the available columns.
Measuring phase bucket 0 means "connected".

All simulation is double precision; witness norms are cross-checked against
the exact values from :mod:`stconn.electrical`.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import null_space

from .compose import STProblem
from .electrical import effective_capacitance, effective_resistance
from .errors import PreconditionViolated, SimulationTooLarge
from .graph import Assignment, all_assignments, as_assignment, st_connected_batch

SELF_CHECK_LIMIT = 1 << 12


def load_config() -> dict:
    with resources.files("stconn").joinpath("qsim_config.json").open() as fh:
        return json.load(fh)


@dataclass
class SpanProgramInstance:
    problem: STProblem
    boundary: np.ndarray
    target: np.ndarray
    R_max: Fraction | None = None
    C_max: Fraction | None = None
    assignments: tuple[Assignment, ...] = ()

    @property
    def columns(self) -> int:
        return self.boundary.shape[1]

    def availability(self, x) -> np.ndarray:
        x = as_assignment(x)
        present = self.problem.graph.presence(np.array([x.bits], dtype=np.uint8).reshape(1, -1))[0]
        return np.repeat(present, 2)

    def witness_product(self) -> float:
        """``R_max * C_max`` with absent sides floored at 1."""
        return float(self.R_max or 1) * float(self.C_max or 1)


def _boundary(P: STProblem) -> tuple[np.ndarray, np.ndarray]:
    G = P.graph
    A = np.zeros((G.n, 2 * G.m))
    h = 1 / math.sqrt(2)
    for j, e in enumerate(G.edges):
        A[e.u, 2 * j], A[e.v, 2 * j] = h, -h
        A[e.v, 2 * j + 1], A[e.u, 2 * j + 1] = h, -h
    tau = np.zeros(G.n)
    tau[P.s], tau[P.t] = 1.0, -1.0
    return A, tau


def _in_span(A: np.ndarray, tau: np.ndarray, tol: float = 1e-9) -> bool:
    if A.shape[1] == 0:
        return bool(np.allclose(tau, 0))
    w, *_ = np.linalg.lstsq(A, tau, rcond=None)
    return bool(np.linalg.norm(A @ w - tau) < tol)


def build_span_program(
    P: STProblem, promise: Iterable | None = None, *, self_check: bool = True
) -> SpanProgramInstance:
    """Span program for ``P`` with witness maxima over ``promise`` (default: all ``x``).

    With ``self_check`` and ``2**N <= 4096``, target membership in the span of
    the available columns is compared with classical connectivity for every
    assignment; on graphs with at most five vertices the numerical witness
    sizes are also compared with the exact ones.
    """
    if P.graph.n < 2:
        raise PreconditionViolated("need at least two vertices")
    A, tau = _boundary(P)
    if promise is None:
        if (1 << P.N) > SELF_CHECK_LIMIT:
            xs: tuple[Assignment, ...] = ()
        else:
            xs = tuple(Assignment(tuple(r)) for r in all_assignments(P.N))
    else:
        xs = tuple(as_assignment(x) for x in promise)
    S = SpanProgramInstance(P, A, tau, assignments=xs)
    if self_check and (1 << P.N) <= SELF_CHECK_LIMIT:
        rows = all_assignments(P.N)
        truth = st_connected_batch(P.graph, P.s, P.t, rows)
        for row, want in zip(rows, truth):
            mask = S.availability(Assignment(tuple(row)))
            if _in_span(A[:, mask], tau) != bool(want):
                raise AssertionError(f"span membership disagrees with connectivity at x={''.join(map(str, row))}")
    if self_check and P.graph.n <= 5 and (1 << P.N) <= SELF_CHECK_LIMIT:
        for row in all_assignments(P.N):
            x = Assignment(tuple(row))
            pos, neg = witness_diagnostics(S, x)
            exact = effective_resistance(P, x) if P.connected(x) else effective_capacitance(P, x)
            got = pos if P.connected(x) else neg
            if abs(got - float(exact)) > 1e-9:
                raise AssertionError(f"witness size {got} differs from exact {exact} at x={x}")
    r_max = c_max = None
    for x in xs:
        if P.connected(x):
            r = effective_resistance(P, x)
            r_max = r if r_max is None else max(r_max, r)
        else:
            c = effective_capacitance(P, x)
            c_max = c if c_max is None else max(c_max, c)
    S.R_max, S.C_max = r_max, c_max
    return S


def witness_diagnostics(S: SpanProgramInstance, x) -> tuple[float, float]:
    """Numerical (positive witness norm^2, negative witness size) from the span program.

    The side that does not exist for ``x`` is ``inf``.
    """
    mask = S.availability(x)
    A, tau = S.boundary, S.target
    avail = A[:, mask]
    if _in_span(avail, tau):
        w = np.linalg.pinv(avail) @ tau
        return float(w @ w), math.inf
    # negative witness: potential constant on available columns, unit across s-t
    basis = null_space(avail.T) if avail.shape[1] else np.eye(A.shape[0])
    b = basis.T @ tau
    off = A[:, ~mask]
    M = basis.T @ off @ off.T @ basis
    z, *_ = np.linalg.lstsq(M, b, rcond=None)
    denom = float(b @ z)
    if denom <= 1e-12:
        return math.inf, 0.0
    return math.inf, 1.0 / denom


def _walk_operator(S: SpanProgramInstance, mask: np.ndarray, alpha: float) -> np.ndarray:
    aug = np.hstack([S.target[:, None] / alpha, S.boundary])
    kernel = null_space(aug)
    lam = kernel @ kernel.T
    pi = np.concatenate([[1.0], mask.astype(float)])
    D = aug.shape[1]
    ref_lam = 2 * lam - np.eye(D)
    return (2 * pi - 1)[:, None] * ref_lam


def phase_distribution(S: SpanProgramInstance, x, phase_bits: int, alpha: float) -> np.ndarray:
    """Outcome distribution of ``phase_bits``-bit phase estimation on ``|0>``.

    The joint register state after the controlled powers holds
    ``U^k |0> / sqrt(2^p)`` in row ``k``; an inverse QFT over rows follows.
    """
    mask = S.availability(x)
    U = _walk_operator(S, mask, alpha)
    K = 1 << phase_bits
    D = U.shape[0]
    state = np.empty((K, D))
    vec = np.zeros(D)
    vec[0] = 1.0
    for k in range(K):
        state[k] = vec
        vec = U @ vec
    amp = np.fft.fft(state, axis=0) / K
    probs = (np.abs(amp) ** 2).sum(axis=1)
    return probs / probs.sum()


@dataclass
class SimulationOutcome:
    decision: bool
    error_estimate: float
    walk_applications: int
    budget: int
    zero_bucket_mass: float
    phase_bits: int
    qubits: int
    connected: bool
    reps: int
    seed: int
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def _plan(S: SpanProgramInstance, budget_multiplier: float, cfg: dict) -> tuple[int, int, float]:
    base = max(1, math.ceil(budget_multiplier * math.sqrt(S.witness_product())))
    bits = math.ceil(math.log2(base)) + int(cfg["extra_phase_bits"])
    alpha = math.sqrt(cfg["positive_weight"] * float(S.R_max or 1))
    return base, bits, alpha


def register_qubits(S: SpanProgramInstance, phase_bits: int) -> int:
    """Qubits of the simulated space: edge-slot register plus phase register."""
    return math.ceil(math.log2(S.columns + 1)) + phase_bits


def simulate_decision(
    S: SpanProgramInstance,
    x,
    budget_multiplier: float | None = None,
    *,
    reps: int = 25,
    seed: int = 0,
    config: dict | None = None,
) -> SimulationOutcome:
    """Run ``reps`` independent phase-estimation shots and decide by majority.

    A shot reads "connected" when it lands in phase bucket 0; the decision
    compares the fraction of such shots with ``zero_bucket_threshold``.
    ``error_estimate`` is the fraction of shots that disagree with classical
    connectivity.
    """
    cfg = dict(load_config() if config is None else config)
    c = cfg["budget_constant"] if budget_multiplier is None else budget_multiplier
    x = as_assignment(x)
    if not S.assignments:
        raise SimulationTooLarge(f"2^{S.problem.N} assignments: witness maxima unknown without a promise")
    _, bits, alpha = _plan(S, c, cfg)
    K = 1 << bits
    dim = K * (S.columns + 1)
    if dim > cfg["max_dimension"]:
        raise SimulationTooLarge(f"state dimension {dim} exceeds cap {cfg['max_dimension']}")
    probs = phase_distribution(S, x, bits, alpha)
    truth = S.problem.connected(x)
    rng = np.random.default_rng(seed)
    shots = rng.choice(K, size=reps, p=probs)
    zero_frac = float(np.mean(shots == 0))
    wrong = float(np.mean((shots == 0) != truth))
    return SimulationOutcome(
        decision=zero_frac >= cfg["zero_bucket_threshold"],
        error_estimate=wrong,
        walk_applications=K - 1,
        budget=K,
        zero_bucket_mass=float(probs[0]),
        phase_bits=bits,
        qubits=register_qubits(S, bits),
        connected=truth,
        reps=reps,
        seed=seed,
        config={"budget_multiplier": c, **{k: cfg[k] for k in ("positive_weight", "extra_phase_bits",
                                                               "zero_bucket_threshold")}},
    )


def shot_error(S: SpanProgramInstance, x, budget_multiplier: float, config: dict | None = None) -> float:
    """Exact probability that a single shot decides wrongly."""
    cfg = load_config() if config is None else config
    _, bits, alpha = _plan(S, budget_multiplier, cfg)
    p0 = phase_distribution(S, x, bits, alpha)[0]
    return float(1 - p0) if S.problem.connected(x) else float(p0)


def decision_accuracy(S: SpanProgramInstance, budget_multiplier: float, config: dict | None = None,
                      assignments: Sequence | None = None) -> float:
    """Fraction of assignments whose exact majority decision is correct."""
    cfg = load_config() if config is None else config
    xs = S.assignments if assignments is None else [as_assignment(x) for x in assignments]
    _, bits, alpha = _plan(S, budget_multiplier, cfg)
    good = 0
    for x in xs:
        p0 = phase_distribution(S, x, bits, alpha)[0]
        good += bool(p0 >= cfg["zero_bucket_threshold"]) == S.problem.connected(x)
    return good / len(xs)


def calibration_suite() -> list[SpanProgramInstance]:
    """Single edge, paths of length 2 and 3 (s, t at the ends), triangle (s, t adjacent)."""
    from .graph import complete_graph, path_graph

    problems = [
        STProblem(path_graph(2), 0, 1, "cal-edge"),
        STProblem(path_graph(3), 0, 2, "cal-path2"),
        STProblem(path_graph(4), 0, 3, "cal-path3"),
        STProblem(complete_graph(3), 0, 1, "cal-triangle"),
    ]
    return [build_span_program(P) for P in problems]


def calibrate(grid: Sequence[float] | None = None, config: dict | None = None) -> float:
    """Smallest grid multiplier keeping every calibration shot error within target."""
    cfg = load_config() if config is None else config
    grid = [0.5 * k for k in range(1, 41)] if grid is None else grid
    suite = calibration_suite()
    for c in grid:
        if all(shot_error(S, x, c, cfg) <= cfg["calibration_error_target"] for S in suite for x in S.assignments):
            return c
    raise RuntimeError("no multiplier on the grid meets the calibration target")
