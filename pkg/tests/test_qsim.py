import math

import numpy as np
import pytest

from stconn import qsim
from stconn.compose import STProblem, bipartite_double, g_cyc, parallel, single_edge
from stconn.electrical import effective_resistance
from stconn.errors import SimulationTooLarge
from stconn.graph import ALWAYS, LabeledGraph, Literal, complete_graph, path_graph


def edge_program():
    return qsim.build_span_program(single_edge(Literal(0), 1))


def test_frozen_config():
    cfg = qsim.load_config()
    assert cfg["extra_phase_bits"] == 2
    assert cfg["zero_bucket_threshold"] == 0.5
    assert cfg["max_dimension"] == 2 ** 14
    assert cfg["budget_constant"] == 3.0


def test_calibration_reproduces_frozen_constant():
    assert qsim.calibrate() == qsim.load_config()["budget_constant"]


def test_single_edge_system():
    S = edge_program()
    assert S.boundary.shape == (2, 2)
    assert qsim.witness_diagnostics(S, "1") == pytest.approx((1.0, math.inf))
    assert qsim.witness_diagnostics(S, "0") == pytest.approx((math.inf, 1.0))


def test_parallel_edges_split_the_witness():
    S = qsim.build_span_program(parallel(single_edge(ALWAYS, 0), single_edge(ALWAYS, 0)))
    assert qsim.witness_diagnostics(S, "")[0] == pytest.approx(0.5, abs=1e-12)


def test_cycle_triangle_witness():
    S = qsim.build_span_program(g_cyc(complete_graph(3)))
    assert qsim.witness_diagnostics(S, "111")[0] == pytest.approx(1.0, abs=1e-9)
    assert (S.R_max, S.C_max) == (1, 3)


def test_witnesses_match_exact_values():
    P = g_cyc(complete_graph(4))
    S = qsim.build_span_program(P, self_check=False)
    for x in S.assignments:
        pos, neg = qsim.witness_diagnostics(S, x)
        if P.connected(x):
            assert pos == pytest.approx(float(effective_resistance(P, x)), abs=1e-9)
        else:
            assert pos == math.inf and neg > 0


def test_trivial_decisions():
    S = edge_program()
    on = qsim.simulate_decision(S, "1", 3.0, reps=25, seed=1)
    off = qsim.simulate_decision(S, "0", 3.0, reps=25, seed=1)
    assert on.decision and on.error_estimate <= 1 / 3
    assert not off.decision and off.error_estimate <= 1 / 3
    # kernel vector (1, -w / alpha) with |w|^2 = 1 and alpha^2 = 32
    assert on.zero_bucket_mass == pytest.approx(32 / 33)


def test_outcome_fields():
    S = qsim.build_span_program(g_cyc(complete_graph(3)))
    out = qsim.simulate_decision(S, "110", reps=11, seed=3)
    assert out.walk_applications <= out.budget
    assert out.budget == 2 ** out.phase_bits
    base = math.ceil(3.0 * math.sqrt(1 * 3))
    assert out.phase_bits == math.ceil(math.log2(base)) + 2
    assert out.qubits == math.ceil(math.log2(S.columns + 1)) + out.phase_bits
    assert out.config["budget_multiplier"] == 3.0


def test_seeded_runs_repeat():
    S = qsim.build_span_program(bipartite_double(path_graph(4), 0, 3))
    a = qsim.simulate_decision(S, "101", reps=25, seed=9).to_dict()
    b = qsim.simulate_decision(S, "101", reps=25, seed=9).to_dict()
    assert a == b


def test_dimension_cap():
    S = qsim.build_span_program(g_cyc(complete_graph(4)))
    cfg = dict(qsim.load_config(), max_dimension=100)
    with pytest.raises(SimulationTooLarge):
        qsim.simulate_decision(S, "111111", config=cfg)


def test_phase_distribution_is_normalised():
    S = qsim.build_span_program(g_cyc(complete_graph(3)))
    probs = qsim.phase_distribution(S, "101", 4, math.sqrt(32))
    assert probs.sum() == pytest.approx(1.0) and (probs >= 0).all()


def test_walk_operator_is_orthogonal():
    S = qsim.build_span_program(g_cyc(complete_graph(3)))
    U = qsim._walk_operator(S, S.availability("011"), 2.0)
    assert np.allclose(U @ U.T, np.eye(U.shape[0]))


@pytest.mark.parametrize("P", [g_cyc(complete_graph(3)), bipartite_double(path_graph(4), 0, 3)],
                         ids=["cyc-triangle", "double-path"])
def test_accuracy_monotone_in_budget(P):
    S = qsim.build_span_program(P)
    c = qsim.load_config()["budget_constant"]
    levels = [qsim.decision_accuracy(S, k * c) for k in (0.5, 1, 2)]
    assert levels == sorted(levels)
    assert levels[1] == 1.0


def test_shot_error_below_calibration_target():
    cfg = qsim.load_config()
    for S in qsim.calibration_suite():
        for x in S.assignments:
            assert qsim.shot_error(S, x, cfg["budget_constant"]) <= cfg["calibration_error_target"]


def test_availability_doubles_edges():
    S = qsim.build_span_program(STProblem(LabeledGraph(2, (), 0), 0, 1))
    assert S.availability("").shape == (0,)
    S = qsim.build_span_program(STProblem(path_graph(3), 0, 2))
    assert S.availability("10").tolist() == [True, True, False, False]


def test_unknown_maxima_refuse_to_simulate():
    S = qsim.build_span_program(g_cyc(complete_graph(6)), self_check=False)
    assert S.assignments == () and S.R_max is None
    with pytest.raises(SimulationTooLarge):
        qsim.simulate_decision(S, "1" * 15)
