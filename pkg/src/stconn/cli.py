"""Command-line entry point: ``stconn <subcommand> ...``.

Exit codes: 0 success, 1 a verification suite failed, 2 invalid input,
3 an enumeration or simulation cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import SCHEMA, bounds, compose, electrical, graph, qsim, verify
from .errors import EnumerationCapExceeded, InvalidAssignment, SimulationTooLarge, StconnError

EXIT_OK, EXIT_FAILED, EXIT_INVALID, EXIT_CAP = 0, 1, 2, 3

# public operation -> subcommand that reaches it
COVERAGE = {
    "graph.instantiate": "export",
    "graph.circuit_rank": "export",
    "graph.count_spanning_trees": "export",
    "graph.count_spanning_trees_with_edge": "resistance",
    "graph.has_cycle": "export",
    "graph.is_st_connected": "export",
    "graph.is_bipartite_component": "export",
    "graph.has_odd_path": "export",
    "graph.has_even_cycle": "export",
    "graph.is_cactus": "export",
    "graph.small_graphs": "export",
    "graph.to_dot": "export",
    "compose.parallel": "reduce",
    "compose.series": "reduce",
    "compose.bipartite_double": "reduce",
    "compose.g_minus": "reduce",
    "compose.g_one": "reduce",
    "compose.g_ell": "reduce",
    "compose.g_cyc": "reduce",
    "compose.g_bip": "reduce",
    "compose.g_even": "reduce",
    "compose.g_even_ell": "reduce",
    "electrical.effective_resistance": "resistance",
    "electrical.unit_flow_energy": "resistance",
    "electrical.resistance_from_spanning_trees": "resistance",
    "electrical.effective_capacitance": "capacitance",
    "electrical.approx_negative_witness": "witness",
    "electrical.st_potential": "witness",
    "bounds.query_bound": "bound",
    "bounds.estimation_bound": "bound",
    "bounds.promise_cycle": "bound",
    "bounds.promise_bipartite": "bound",
    "bounds.promise_even_cycle": "bound",
    "bounds.promise_cyclic_sparse": "bound",
    "bounds.scaling_table": "scaling",
    "bounds.cycle_grid": "scaling",
    "qsim.build_span_program": "simulate",
    "qsim.simulate_decision": "simulate",
    "qsim.witness_diagnostics": "simulate",
    "qsim.calibrate": "simulate",
    "verify.run_suite": "verify",
}

REDUCE_KINDS = ("cyc", "bip", "even", "double", "ell", "even-ell", "minus", "one", "parallel", "series")


class UsageError(Exception):
    pass


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return electrical.fmt(obj)
    if isinstance(obj, float) and math.isinf(obj):
        return "inf"
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        return obj.item()
    return obj


def _dump(payload: dict) -> str:
    return json.dumps(_jsonable({"schema": SCHEMA, **payload}), indent=2) + "\n"


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load(path: str | None) -> tuple[graph.LabeledGraph, dict]:
    if not path:
        raise UsageError("--input is required")
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    if "graph" in data and "edges" not in data:
        data = {**data, **data["graph"]}
    return graph.graph_from_dict(data), data


def _problem(args, G: graph.LabeledGraph, data: dict) -> compose.STProblem:
    if getattr(args, "reduction", None):
        return _reduce(args.reduction, G, args)
    s = args.s if args.s is not None else data.get("s")
    t = args.t if args.t is not None else data.get("t")
    if s is None or t is None:
        raise UsageError("--s and --t are required (or an input carrying s and t)")
    return compose.STProblem(G, int(s), int(t), data.get("provenance", ""))


def _assignment(args, N: int) -> graph.Assignment:
    if args.x is None:
        raise UsageError("--x is required")
    x = graph.Assignment.parse(args.x)
    if len(x) != N:
        raise InvalidAssignment(f"assignment has length {len(x)}, graph needs {N}")
    return x


def _reduce(kind: str, G: graph.LabeledGraph, args) -> compose.STProblem:
    edge = getattr(args, "edge", None)
    if kind in ("ell", "even-ell", "minus", "one") and edge is None:
        raise UsageError(f"--kind {kind} needs --edge")
    if kind == "double":
        if args.u is None:
            raise UsageError("--kind double needs --u (and optionally --v)")
        return compose.bipartite_double(G, args.u, args.u if args.v is None else args.v)
    if kind in ("parallel", "series"):
        other_path = getattr(args, "with_input", None)
        if not other_path:
            raise UsageError(f"--kind {kind} needs --with FILE")
        H, hdata = _load(other_path)
        _, data = _load(args.input)
        A = compose.STProblem(G, int(data.get("s", 0)), int(data.get("t", 1)))
        B = compose.STProblem(H, int(hdata.get("s", 0)), int(hdata.get("t", 1)))
        return (compose.parallel if kind == "parallel" else compose.series)(A, B)
    table = {
        "cyc": lambda: compose.g_cyc(G),
        "bip": lambda: compose.g_bip(G),
        "even": lambda: compose.g_even(G),
        "ell": lambda: compose.g_ell(G, edge),
        "even-ell": lambda: compose.g_even_ell(G, edge),
        "minus": lambda: compose.g_minus(G, edge),
        "one": lambda: compose.g_one(G, edge),
    }
    if kind not in table:
        raise UsageError(f"unknown reduction {kind!r}")
    return table[kind]()


def _promise_params(text: str | None) -> dict[str, int]:
    if not text:
        return {}
    out = {}
    for part in text.split(","):
        key, sep, value = part.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in ("r", "r_min", "mu", "mu_max"):
            raise UsageError(f"bad --promise item {part!r}; use r=INT,mu=INT")
        out["r_min" if key.startswith("r") else "mu_max"] = int(value)
    return out


# --- subcommands -------------------------------------------------------------


def cmd_reduce(args) -> int:
    G, _ = _load(args.input)
    P = _reduce(args.kind, G, args)
    if args.export == "dot":
        _write(graph.to_dot(P.graph, args.x, name=P.provenance.split("[")[0] or "G", s=P.s, t=P.t), args.out)
    else:
        payload = {"provenance": P.provenance, "s": P.s, "t": P.t, **graph.graph_to_dict(P.graph)}
        if args.x is not None:
            payload["x"] = str(_assignment(args, P.N))
            payload["connected"] = P.connected(payload["x"])
        _write(_dump(payload), args.out)
    return EXIT_OK


def cmd_resistance(args) -> int:
    G, data = _load(args.input)
    P = _problem(args, G, data)
    x = _assignment(args, P.N)
    payload = {"provenance": P.provenance, "s": P.s, "t": P.t, "x": str(x), "connected": P.connected(x)}
    if args.method == "flow":
        payload["R"] = electrical.unit_flow_energy(P, x) if payload["connected"] else electrical.INF
    else:
        payload["R"] = electrical.effective_resistance(P, x)
    payload["method"] = args.method
    if args.per_edge:
        H = P.realise(x)
        payload["edges"] = [
            {"label": lab, "u": u, "v": v, "R": r, "tree_ratio": electrical.resistance_from_spanning_trees(H, lab)}
            for (u, v), lab, r in zip(H.edges, H.labels, electrical.edge_resistances(H))
        ]
    if args.float:
        payload["R_float"] = float(payload["R"])
    _write(_dump(payload), args.out)
    return EXIT_OK


def cmd_capacitance(args) -> int:
    G, data = _load(args.input)
    P = _problem(args, G, data)
    x = _assignment(args, P.N)
    C = electrical.effective_capacitance(P, x)
    payload = {"provenance": P.provenance, "s": P.s, "t": P.t, "x": str(x), "connected": P.connected(x), "C": C}
    if args.float:
        payload["C_float"] = float(C)
    _write(_dump(payload), args.out)
    return EXIT_OK


def cmd_witness(args) -> int:
    G, data = _load(args.input)
    P = _problem(args, G, data)
    x = _assignment(args, P.N)
    payload = {
        "provenance": P.provenance,
        "s": P.s,
        "t": P.t,
        "x": str(x),
        "witness": electrical.approx_negative_witness(P, x),
    }
    if args.potential:
        payload["potential"] = electrical.st_potential(P, x)
    _write(_dump(payload), args.out)
    return EXIT_OK


def cmd_bound(args) -> int:
    params = _promise_params(args.promise)
    if args.reduction:
        if args.n is None:
            raise UsageError("--reduction needs --n")
        P, fixed = bounds.family_problem(args.reduction, args.n)
        if args.epsilon is not None:
            if args.reduction != "cyc":
                raise UsageError("--epsilon is only defined for --reduction cyc")
            mu = params.get("mu_max", args.n * (args.n - 1) // 2)
            X = bounds.promise_cyclic_sparse(args.n, mu)
            rep = bounds.estimation_bound(P, X, args.epsilon, symmetric=True)
        else:
            X = bounds.family_promise(args.reduction, args.n, params.get("r_min", 1), params.get("mu_max"))
            rep = bounds.query_bound(P, X, symmetric=True, fixed=fixed)
        payload = {"reduction": args.reduction, "n": args.n, **rep.to_dict()}
        if args.epsilon is None:
            payload["reference"] = bounds.reference_curve(args.reduction, args.n, params.get("r_min", 1),
                                                          params.get("mu_max"))
    else:
        G, data = _load(args.input)
        P = _problem(args, G, data)
        X = bounds.explicit(args.members.split(","), P.N) if args.members else bounds.everything(P.N)
        if args.epsilon is not None:
            rep = bounds.estimation_bound(P, X, args.epsilon)
        else:
            rep = bounds.query_bound(P, X, sample=args.sample, seed=args.seed)
        payload = {"provenance": P.provenance, **rep.to_dict()}
    _write(_dump(payload), args.out)
    return EXIT_OK


def cmd_scaling(args) -> int:
    ns = range(args.nmin, args.nmax + 1)
    if args.grid:
        if args.family != "cyc":
            raise UsageError("--grid is only defined for --family cyc")
        rows = bounds.cycle_grid(ns)
        header = ["n", "r_min", "mu_max", "R_max", "C_max", "bound", "reference", "ratio"]
        lines = [",".join(header)]
        for row in rows:
            cells = [electrical.fmt(v) if isinstance(v, Fraction) else (f"{v:.6f}" if isinstance(v, float) else str(v))
                     for v in (row[k] for k in header)]
            lines.append(",".join(cells))
        text = "\n".join(lines) + "\n"
    else:
        rows = bounds.scaling_table(args.family, ns, args.r_min, args.mu_max)
        text = bounds.rows_to_csv(rows)
    _write(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = verify.run_suite(args.suite, args.nmax, args.seed)
    lines = []
    for r in results:
        lines.append(f"{'PASS' if r.passed else 'FAIL'} {r.name} ({r.checked} checks)")
        if not r.passed:
            lines.append("  first counterexample: " + json.dumps(_jsonable(r.counterexample), sort_keys=True))
    if args.json:
        _write(_dump({"suites": [r.to_dict() for r in results]}), args.out)
        sys.stderr.write("\n".join(lines) + "\n")
    else:
        _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED


def cmd_simulate(args) -> int:
    if args.calibrate:
        c = qsim.calibrate()
        _write(_dump({"budget_constant": c, "config": qsim.load_config()}), args.out)
        return EXIT_OK
    G, data = _load(args.input)
    P = _problem(args, G, data)
    x = _assignment(args, P.N)
    S = qsim.build_span_program(P)
    out = qsim.simulate_decision(S, x, args.budget_mult, reps=args.reps, seed=args.seed)
    pos, neg = qsim.witness_diagnostics(S, x)
    payload = {
        "provenance": P.provenance,
        "x": str(x),
        **out.to_dict(),
        "R_max": S.R_max,
        "C_max": S.C_max,
        "witness_norm": pos,
        "negative_witness": neg,
    }
    _write(_dump(payload), args.out)
    return EXIT_OK


def _builtin_graph(args) -> graph.LabeledGraph | None:
    for flag, build in (("complete", graph.complete_graph), ("path", graph.path_graph), ("cycle", graph.cycle_graph)):
        n = getattr(args, flag)
        if n is not None:
            return build(n)
    return None


def cmd_export(args) -> int:
    if args.atlas is not None:
        graphs = [graph.graph_to_dict(G) for G in graph.small_graphs(args.atlas, connected=args.connected)]
        _write(_dump({"n": args.atlas, "connected_only": args.connected, "graphs": graphs}), args.out)
        return EXIT_OK
    G = _builtin_graph(args)
    data = {}
    if G is None:
        G, data = _load(args.input)
    if args.export == "dot":
        _write(graph.to_dot(G, args.x, s=data.get("s"), t=data.get("t")), args.out)
        return EXIT_OK
    payload = {**{k: data[k] for k in ("provenance", "s", "t") if k in data}, **graph.graph_to_dict(G)}
    if args.x is not None:
        x = _assignment(args, G.N)
        H = graph.instantiate(G, x)
        facts = {
            "x": str(x),
            "present": list(H.labels),
            "circuit_rank": graph.circuit_rank(H),
            "spanning_trees": graph.count_spanning_trees(H),
            "has_cycle": graph.has_cycle(H),
            "has_even_cycle": graph.has_even_cycle(H),
            "is_cactus": graph.is_cactus(H),
            "bipartite": all(graph.is_bipartite_component(H, u) for u in range(H.n)),
        }
        if args.s is not None and args.t is not None:
            facts["st_connected"] = graph.is_st_connected(H, args.s, args.t)
            facts["odd_path"] = graph.has_odd_path(H, args.s, args.t)
        payload["facts"] = facts
    _write(_dump(payload), args.out)
    return EXIT_OK


# --- parser ------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, *, st: bool = True, x: bool = True) -> None:
    p.add_argument("--input", "--graph", dest="input", metavar="FILE", help="graph JSON")
    if st:
        p.add_argument("--s", type=int)
        p.add_argument("--t", type=int)
    if x:
        p.add_argument("--x", metavar="BITSTRING")
    p.add_argument("--out", metavar="FILE")


def _with_reduction(p: argparse.ArgumentParser) -> None:
    p.add_argument("--reduction", choices=REDUCE_KINDS, help="apply a reduction to the input first")
    p.add_argument("--edge", type=int)
    p.add_argument("--u", type=int)
    p.add_argument("--v", type=int)
    p.add_argument("--with", dest="with_input", metavar="FILE")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stconn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="build a reduction graph")
    _common(p, st=False)
    p.add_argument("--kind", required=True, choices=REDUCE_KINDS)
    p.add_argument("--edge", type=int, help="edge label for ell, even-ell, minus, one")
    p.add_argument("--u", type=int)
    p.add_argument("--v", type=int)
    p.add_argument("--with", dest="with_input", metavar="FILE", help="second operand for parallel/series")
    p.add_argument("--export", choices=("json", "dot"), default="json")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("resistance", help="effective resistance")
    _common(p)
    _with_reduction(p)
    p.add_argument("--method", choices=("kron", "flow"), default="kron")
    p.add_argument("--per-edge", action="store_true", help="also list R and t_l/t across every present edge")
    p.add_argument("--float", action="store_true")
    p.set_defaults(func=cmd_resistance)

    p = sub.add_parser("capacitance", help="effective capacitance")
    _common(p)
    _with_reduction(p)
    p.add_argument("--float", action="store_true")
    p.set_defaults(func=cmd_capacitance)

    p = sub.add_parser("witness", help="approximate negative witness size")
    _common(p)
    _with_reduction(p)
    p.add_argument("--potential", action="store_true")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("bound", help="query or estimation bound over a promise set")
    _common(p, x=False)
    p.add_argument("--reduction", choices=bounds.FAMILIES)
    p.add_argument("--n", type=int)
    p.add_argument("--promise", metavar="r=INT,mu=INT")
    p.add_argument("--members", metavar="BITS,BITS,...")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--sample", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("scaling", help="scaling table as CSV")
    p.add_argument("--family", choices=bounds.FAMILIES, required=True)
    p.add_argument("--nmin", type=int, default=3)
    p.add_argument("--nmax", type=int, default=6)
    p.add_argument("--r-min", type=int, default=1)
    p.add_argument("--mu-max", type=int)
    p.add_argument("--grid", action="store_true", help="every feasible (r, mu) for cyc")
    p.add_argument("--export", choices=("csv",), default="csv")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_scaling)

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("--suite", required=True, choices=(*verify.SUITES, "all"))
    p.add_argument("--nmax", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="simulate the span-program decision")
    _common(p)
    _with_reduction(p)
    p.add_argument("--budget-mult", type=float)
    p.add_argument("--reps", type=int, default=25)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--calibrate", action="store_true", help="recompute the budget constant")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("export", help="serialise a graph (JSON or DOT), optionally with oracle facts")
    _common(p)
    p.add_argument("--export", choices=("json", "dot"), default="json")
    p.add_argument("--complete", type=int, metavar="N")
    p.add_argument("--path", type=int, metavar="N")
    p.add_argument("--cycle", type=int, metavar="N")
    p.add_argument("--atlas", type=int, metavar="N", help="every graph on N vertices")
    p.add_argument("--connected", action="store_true")
    p.set_defaults(func=cmd_export)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INVALID
    try:
        return args.func(args)
    except (EnumerationCapExceeded, SimulationTooLarge) as exc:
        sys.stderr.write(f"stconn: {exc}\n")
        return EXIT_CAP
    except (StconnError, UsageError, ValueError) as exc:
        sys.stderr.write(f"stconn: error: {exc}\n")
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
