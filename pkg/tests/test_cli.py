import importlib
import json

import pytest

from stconn import cli
from stconn.verify import load_figure


@pytest.fixture
def fig(tmp_path):
    def write(name):
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(load_figure(name)))
        return str(path)

    return write


def call(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_circuit_rank(capsys):
    code, out, _ = call(capsys, "verify", "--suite", "circuit-rank", "--nmax", "5")
    assert code == 0 and out.startswith("PASS circuit-rank")


def test_verify_reports_first_counterexample(capsys):
    code, out, _ = call(capsys, "verify", "--suite", "reductions", "--nmax", "5")
    assert code == 1
    line = next(l for l in out.splitlines() if "first counterexample" in l)
    cx = json.loads(line.split(":", 1)[1])
    assert "graph" in cx and "x" in cx


def test_reduce_k4_cycle_dot(capsys, fig):
    code, out, _ = call(capsys, "reduce", "--kind", "cyc", "--input", fig("fig1"), "--export", "dot")
    assert code == 0
    body = out.splitlines()
    edges = [l for l in body if " -- " in l]
    assert len(edges) == 36
    nodes = {tok for l in edges for tok in l.strip().split(" [")[0].split(" -- ")}
    assert len(nodes) == 20


def test_reduce_json_with_assignment(capsys, fig):
    code, out, _ = call(capsys, "reduce", "--kind", "cyc", "--input", fig("fig1"), "--x", "011011")
    data = json.loads(out)
    assert code == 0 and data["schema"] == "stconn-kit/1"
    assert list(data)[0] == "schema" and data["connected"] is True


def test_bound_bip(capsys):
    code, out, _ = call(capsys, "bound", "--reduction", "bip", "--n", "4")
    data = json.loads(out)
    assert code == 0
    assert {"R_max", "C_max", "bound"} <= set(data)
    assert (data["R_max"], data["C_max"]) == ("1/2", "24")


def test_resistance_and_capacitance_on_figure(capsys, fig):
    path = fig("fig1")
    _, out, _ = call(capsys, "resistance", "--input", path, "--reduction", "cyc", "--x", "011011")
    assert json.loads(out)["R"] == "1"
    _, out, _ = call(capsys, "capacitance", "--input", path, "--reduction", "cyc", "--x", "100000")
    assert json.loads(out)["C"] != "inf"
    _, out, _ = call(capsys, "capacitance", "--input", path, "--reduction", "cyc", "--x", "011011")
    assert json.loads(out)["C"] == "inf"


def test_flow_method_agrees(capsys, fig):
    path = fig("fig2")
    args = ("resistance", "--input", path, "--reduction", "double", "--u", "0", "--v", "3", "--x", "111")
    _, kron, _ = call(capsys, *args)
    _, flow, _ = call(capsys, *args, "--method", "flow")
    assert json.loads(kron)["R"] == json.loads(flow)["R"]


@pytest.mark.parametrize("argv", [
    ("bound", "--reduction", "cyc", "--n", "4"),
    ("scaling", "--family", "bip", "--nmin", "3", "--nmax", "4"),
    ("simulate", "--input", "FIG2", "--reduction", "double", "--u", "0", "--v", "3", "--x", "101", "--seed", "4"),
    ("export", "--complete", "4", "--x", "110011", "--s", "0", "--t", "3"),
])
def test_output_is_deterministic(capsys, fig, argv):
    argv = [fig("fig2") if a == "FIG2" else a for a in argv]
    first = call(capsys, *argv)
    again = call(capsys, *argv)
    assert first[0] == 0 and first == again


def test_out_file(tmp_path, capsys):
    target = tmp_path / "table.csv"
    assert cli.run(["scaling", "--family", "cyc", "--nmin", "3", "--nmax", "4", "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert target.read_text().splitlines()[0].startswith("family,n,")


@pytest.mark.parametrize("argv", [
    ["reduce"],
    ["nope"],
    ["reduce", "--kind", "cyc", "--bogus"],
    ["bound", "--reduction", "bip"],
    ["resistance", "--input", "/does/not/exist", "--s", "0", "--t", "1", "--x", "1"],
])
def test_usage_errors(argv, capsys):
    assert cli.run(argv) == 2


def test_bad_assignment(capsys, fig):
    code, _, err = call(capsys, "resistance", "--input", fig("fig1"), "--reduction", "cyc", "--x", "01")
    assert code == 2 and "length" in err


def test_cap_exceeded(monkeypatch, capsys, tmp_path):
    path = tmp_path / "k4.json"
    assert cli.run(["export", "--complete", "4", "--out", str(path)]) == 0
    monkeypatch.setenv("STCONN_ENUM_CAP", "8")
    argv = ["bound", "--input", str(path), "--s", "0", "--t", "3"]
    assert call(capsys, *argv)[0] == 3
    assert call(capsys, *argv, "--sample", "5")[0] == 0


def test_simulation_too_large(capsys, tmp_path):
    path = tmp_path / "k7.json"
    assert cli.run(["export", "--complete", "7", "--out", str(path)]) == 0
    code = cli.run(["simulate", "--input", str(path), "--reduction", "cyc", "--x", "1" * 21])
    assert code == 3


def test_export_facts(capsys):
    _, out, _ = call(capsys, "export", "--complete", "4", "--x", "111111", "--s", "0", "--t", "3")
    facts = json.loads(out)["facts"]
    assert facts["circuit_rank"] == 3 and facts["spanning_trees"] == 16 and not facts["bipartite"]


def test_simulate_calibrate(capsys):
    code, out, _ = call(capsys, "simulate", "--calibrate")
    assert code == 0 and json.loads(out)["budget_constant"] == 3.0


OPERATIONS = {
    "graph": ["instantiate", "circuit_rank", "count_spanning_trees", "count_spanning_trees_with_edge", "has_cycle",
              "is_st_connected", "is_bipartite_component", "has_odd_path", "has_even_cycle", "is_cactus"],
    "compose": ["parallel", "series", "bipartite_double", "g_minus", "g_one", "g_ell", "g_cyc", "g_bip", "g_even",
                "g_even_ell"],
    "electrical": ["effective_resistance", "effective_capacitance", "approx_negative_witness", "unit_flow_energy"],
    "bounds": ["query_bound", "estimation_bound", "promise_cycle", "promise_bipartite", "promise_even_cycle",
               "scaling_table"],
    "qsim": ["build_span_program", "simulate_decision", "witness_diagnostics"],
}


def test_every_operation_is_reachable():
    subcommands = set(cli.build_parser()._subparsers._group_actions[0].choices)
    for module, names in OPERATIONS.items():
        for name in names:
            assert f"{module}.{name}" in cli.COVERAGE
    for key, sub in cli.COVERAGE.items():
        module, name = key.split(".")
        assert callable(getattr(importlib.import_module(f"stconn.{module}"), name))
        assert sub in subcommands
