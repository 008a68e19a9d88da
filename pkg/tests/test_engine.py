import dataclasses
import os

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vecvp import (
    DeltaSequence,
    EpsSequence,
    FiniteMetricSpace,
    HypothesisError,
    IncompleteTraceError,
    MatrixGauge,
    MetricPower,
    PolyhedralCone,
    VPProblem,
    brute_force_certificate,
    gen_instance,
    parse_instance,
    run_construction,
    verify,
    verify_conclusions,
    verify_corollaries,
)
from vecvp.engine import parse_selection
from vecvp.report import emit_report

from .conftest import ek3_problem

DATA = os.path.join(os.path.dirname(__file__), "data")
THEOREM = ("thm-i", "thm-ii", "thm-iii", "thm-iv")


def test_hand_instance_trace(ek3):
    t = run_construction(ek3)
    assert t.sets[0] == (0, 1, 2)
    assert t.points == [0, 2]
    assert t.sets[1] == (2,)
    assert (t.xbar, t.stab_index, t.j_seq) == (2, 1, [0, 0])
    assert t.dual.lambda_star == 1.0


def test_hand_instance_conclusions(ek3):
    rep = verify_conclusions(ek3, run_construction(ek3))
    assert rep.passed
    assert rep["thm-i"].residual == 0.0
    assert rep["thm-i"].witnesses == {"rho_xbar_x0": 2.0, "bound": 2.0}
    # x = 1 leaves at S_1: f(xbar) - f(1) - delta_0 d(1, xbar) = -0.4 - 0.5
    assert [1, 1] in rep["thm-iv"].witnesses["m0"]
    assert rep["thm-iv"].residual == pytest.approx(0.9, abs=1e-15)


def test_hand_instance_corollaries(ek3):
    rep = verify_corollaries(ek3, run_construction(ek3))
    assert rep.mode == {"N_finite": True, "triangle": True}
    assert rep.ids == ["c4-11", "c4-12", "c4-21", "c4-22", "c4-ss10-2", "r18-su10plus", "c6-4", "p44"]
    assert rep["c6-4"].status == "pass"
    assert rep["c4-ss10-2"].residual == 0.0
    assert rep["r18-su10plus"].status == "n/a"


def test_single_point_space():
    p = ek3_problem(space=FiniteMetricSpace.from_matrix([[0.0]]), f=[3.0])
    t = run_construction(p)
    assert (t.xbar, t.stab_index, t.points, t.steps) == (0, 0, [0], [])
    assert verify(p, t).passed


def test_pareto_start_with_singleton_sector():
    p = ek3_problem(f=[0.0, 0.4, 1.0], eps=0.1)
    t = run_construction(p)
    assert t.sets == [(0,)] and t.xbar == 0
    assert verify(p, t).passed


def test_non_minimal_start_is_rejected(ek3):
    p = ek3_problem(eps=0.5)
    with pytest.raises(HypothesisError) as exc:
        run_construction(p)
    assert exc.value.invariant == "x0-eps-minimal"
    assert "witness point 1, residual 0.1" in str(exc.value)


def test_assumed_hypotheses_make_estimate_informational():
    p = ek3_problem(eps=0.5)
    t = run_construction(p, assume_hypotheses=True)
    rep = verify(p, t)
    assert rep["thm-i"].status == "info"
    assert rep["su6"].status == "info"


def test_boundary_direction_only_with_override():
    p = ek3_problem(cone=PolyhedralCone.orthant(2), cbar=[1.0, 0.0], f=[[1, 0], [0.4, 0], [0, 0]])
    with pytest.raises(HypothesisError) as exc:
        run_construction(p)
    assert exc.value.invariant == "cbar-interior"
    t = run_construction(p, assume_hypotheses=True)
    assert verify(p, t)["thm-i"].status == "info"


def test_invalid_sequences_are_named():
    with pytest.raises(HypothesisError, match="strictly decreasing"):
        run_construction(ek3_problem(eps_seq=EpsSequence((0.5, 0.5), 0.5)))
    with pytest.raises(HypothesisError, match="δ_i>0 for all i<N"):
        run_construction(ek3_problem(delta_seq=DeltaSequence.finite([0.0])))


def test_incomplete_trace_is_flagged():
    p = gen_instance(20, 12, 1, "orthant", "metric_power:1", "inf")
    t = run_construction(p, horizon=1, selection="approximate:1.0")
    assert not t.complete and t.xbar is None and t.iterations == 1
    with pytest.raises(IncompleteTraceError):
        verify(p, t)
    assert not brute_force_certificate(p, t)


def test_selection_parsing():
    assert parse_selection("exact") == ("exact", None)
    assert parse_selection("approximate:0.25") == ("approximate", 0.25)
    for bad in ("approximate:0", "approximate:1.5", "greedy"):
        with pytest.raises(ValueError):
            parse_selection(bad)


def test_key_set_depends_on_mode():
    inf = gen_instance(5, 6, 2, "orthant", "metric_power:1", "inf")
    ids = verify(inf, run_construction(inf)).ids
    assert "c3-ss10" in ids and not any(i.startswith("c4") for i in ids)
    sq = gen_instance(5, 6, 2, "orthant", "metric_power:2", 2)
    ids = verify(sq, run_construction(sq)).ids
    assert "c4-21" in ids and "c6-4" not in ids and "p44" not in ids


def test_divergent_series_make_infinite_corollary_vacuous():
    p = ek3_problem(delta_seq=DeltaSequence((0.5,), 1.0))
    t = run_construction(p, selection="approximate:1.0")
    rep = verify(p, t)
    assert rep.passed
    c = rep["c3-ss10"]
    assert c.status in ("pass", "n/a")
    if t.stab_index >= 1:
        assert c.witnesses["divergent_points"]


def random_problem(seed, n, m, gauge, N, cone):
    return gen_instance(seed, n, m, cone, gauge, N)


instance_params = st.tuples(
    st.integers(0, 10**6),
    st.integers(1, 12),
    st.integers(1, 3),
    st.sampled_from(["metric_power:1", "metric_power:2", "matrix", "norm_power:0.5"]),
    st.sampled_from([1, 2, 3, 5, "inf"]),
    st.sampled_from(["orthant", "random-pointed"]),
)


@settings(max_examples=120, deadline=None)
@given(instance_params, st.sampled_from(["exact", "approximate:0.5", "approximate:1.0"]))
def test_trace_invariants(params, selection):
    p = random_problem(*params)
    t = run_construction(p, selection=selection)
    assert t.complete
    assert p.x0 in t.sets[0]
    for i in range(1, len(t.sets)):
        assert set(t.sets[i]) <= set(t.sets[i - 1])
        assert t.points[i] in t.sets[i]
        N = p.N
        assert t.j_seq[i] == (i if N is None else min(i, N - 1))
    assert t.sets[-1] == (t.xbar,)
    if selection == "exact":
        assert t.stab_index <= 1
    rep = verify_conclusions(p, t)
    for cid in ("su2", "su7", "nesting", "chain", "thm-i", "thm-ii", "thm-iii"):
        assert rep[cid].status in ("pass", "n/a"), cid
    # the diameter of S_i around x_i vanishes at the end
    assert max(p.rho[x, t.points[-1]] for x in t.sets[-1]) == 0.0


@settings(max_examples=120, deadline=None)
@given(instance_params, st.sampled_from(["exact", "approximate:0.5", "approximate:1.0"]))
def test_triangle_gauges_satisfy_every_claim(params, selection):
    p = random_problem(*params)
    t = run_construction(p, selection=selection)
    rep = verify(p, t)
    if p.N is None or rep.mode["triangle"]:
        assert rep.passed, [c.id for c in rep.failures()]
        assert brute_force_certificate(p, t)
    # the independent oracle agrees with the report on the final statements
    final_ok = not (rep["thm-iii"].failed or rep["thm-iv"].failed)
    assert brute_force_certificate(p, t) == final_ok


@settings(max_examples=60, deadline=None)
@given(instance_params, st.sampled_from(["exact", "approximate:0.5"]), st.integers(1, 40))
def test_report_is_stable_past_stabilization(params, selection, extra):
    p = random_problem(*params)
    t1 = run_construction(p, selection=selection)
    t2 = run_construction(p, horizon=t1.stab_index + extra, selection=selection)
    assert emit_report(p, t1, verify(p, t1), "machine") == emit_report(p, t2, verify(p, t2), "machine")


def test_squared_distance_counterexample():
    # A point excluded against x_1 is not excluded against xbar once rho lacks
    # the triangle inequality: the finite-N non-inclusion fails at that point.
    p = parse_instance(os.path.join(DATA, "squared_distance_counterexample.json"))
    t = run_construction(p, selection="approximate:1.0")
    assert t.points == [3, 0, 1] and t.xbar == 1
    rep = verify(p, t)
    assert {c.id for c in rep.failures()} == {"thm-iv", "c4-21", "c4-22", "c4-ss10-2"}
    assert rep["thm-iv"].witnesses["failing_points"] == [2]
    assert t.exit_index(2) == 1
    assert not brute_force_certificate(p, t)
    # recompute the offending value from scratch
    e = np.array(p.space.embedding)
    r = lambda a, b: float(np.sum((e[a] - e[b]) ** 2))  # noqa: E731
    d0, d1 = p.delta_seq(0), p.delta_seq(1)
    f = p.f[:, 0]
    value = f[1] - f[2] - (d0 * (r(2, 3) - r(1, 3)) + d1 * r(2, 1))
    assert value > 0.05
    assert rep["thm-iv"].residual == pytest.approx(-value, abs=1e-12)
    # the theorem's other conclusions still hold, and the exact pick avoids the defect
    for cid in ("thm-i", "thm-ii", "thm-iii", "chain"):
        assert rep[cid].status == "pass"
    t_exact = run_construction(p)
    assert verify(p, t_exact).passed


def test_asymmetric_matrix_gauge_run():
    S = FiniteMetricSpace.from_embedding([[0.0], [1.0], [2.0], [3.0]])
    mat = MatrixGauge([[0, 0.5, 1.2, 0.3], [1.0, 0, 0.2, 0.9], [0.4, 0.7, 0, 1.1], [0.6, 0.8, 0.5, 0]])
    p = VPProblem(S, mat, PolyhedralCone.orthant(2), [1.0, 1.0],
                  [[0.5, 0.1], [0.2, 0.3], [0.0, 0.6], [0.4, -0.2]], 0, 2.0,
                  EpsSequence((0.5,), 0.5), DeltaSequence((0.7,), 0.5))
    for sel in ("exact", "approximate:1.0"):
        t = run_construction(p, selection=sel)
        assert verify(p, t).passed


def test_metric_power_two_with_infinite_n(ek3):
    p = dataclasses.replace(ek3, gauge=MetricPower(2), delta_seq=DeltaSequence((0.25,), 0.5), eps=1.0)
    t = run_construction(p, selection="approximate:1.0")
    assert verify(p, t).passed
