import dataclasses

import pytest

from vecvp import brute_force_certificate, gen_instance, run_construction, verify

from .conftest import ek3_problem


def test_hand_instance_certificate(ek3):
    t = run_construction(ek3)
    assert brute_force_certificate(ek3, t)
    for y in (0, 1):
        assert not brute_force_certificate(ek3, dataclasses.replace(t, xbar=y))


@pytest.mark.parametrize("seed", range(30))
def test_passing_reports_are_certified_and_dominated_swaps_are_not(seed):
    gauge = ["metric_power:1", "matrix", "norm_power:1"][seed % 3]
    N = [1, 3, "inf"][seed % 3]
    p = gen_instance(900 + seed, 4 + seed % 9, 1 + seed % 2, "orthant", gauge, N)
    t = run_construction(p, selection="approximate:0.5" if seed % 2 else "exact")
    rep = verify(p, t)
    assert rep.passed and brute_force_certificate(p, t)
    f = p.f
    for y in range(p.n):
        dominated = y != t.xbar and all(f[y] - f[t.xbar] >= 0)
        if dominated:
            assert not brute_force_certificate(p, dataclasses.replace(t, xbar=y))


def test_certificate_rejects_incomplete_trace():
    p = ek3_problem()
    t = dataclasses.replace(run_construction(p), xbar=None)
    assert not brute_force_certificate(p, t)
