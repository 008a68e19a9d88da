"""Acceptance suite: one test and one printed PASS/FAIL line per criterion."""
import dataclasses
import hashlib
import json
import subprocess
import sys
import time

import numpy as np
import pytest
from scipy.optimize import nnls

from vecvp import (
    DeltaSequence,
    MinimalityMode,
    PolyhedralCone,
    brute_force_certificate,
    check_p26_directional,
    dump_instance,
    gen_instance,
    is_eps_minimal,
    min_eps,
    run_borwein_preiss,
    run_construction,
    run_ekeland,
    verify,
)
from vecvp.cli import main
from vecvp.report import emit_report

from .conftest import EK3_DOC, ek3_space
from .test_principles import ekeland_oracle

TOL = 1e-9
THEOREM = ("thm-i", "thm-ii", "thm-iii", "thm-iv")
COROLLARY = ("c3-ss10", "c4-11", "c4-12", "c4-21", "c4-22", "c4-ss10-2", "r18-su10plus", "c6-4", "p44")
GEN_SHA256 = "3cb728253ae10c594198eba72a39ee7f98efb5c30c132293770adac53796c111"


@pytest.fixture
def announce(capsys):
    def say(number, title, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {number} {title}: {'PASS' if ok else 'FAIL'} ({detail})")
    return say


def suite_instance(k):
    gauge = ("metric_power:1", "metric_power:2", "matrix")[k % 3]
    N = (1, 2, 5, "inf")[(k // 3) % 4]
    m = 1 + (k // 12) % 3
    cone = "orthant" if k % 2 else "random-pointed"
    n = 2 + (7 * k) % 29
    policy = "tight" if k % 5 == 0 else "slack"
    selection = "approximate:0.5" if k % 4 == 1 else "exact"
    return gen_instance(k, n, m, cone, gauge, N, policy), selection


@pytest.fixture(scope="module")
def theorem_runs():
    start = time.perf_counter()
    runs = []
    for k in range(500):
        p, selection = suite_instance(k)
        t = run_construction(p, tol=TOL, selection=selection)
        rep = verify(p, t, TOL) if t.complete else None
        runs.append((k, p, t, rep))
    return runs, time.perf_counter() - start


def test_criterion_1_theorem_suite(theorem_runs, announce):
    runs, elapsed = theorem_runs
    bad = []
    for k, p, t, rep in runs:
        if rep is None:
            bad.append((k, "incomplete"))
            continue
        bad.extend((k, cid) for cid in THEOREM if rep[cid].status not in ("pass", "n/a"))
    sizes = {p.n for _, p, _, _ in runs}
    ok = not bad and elapsed <= 60 and max(sizes) <= 30
    announce(1, "theorem suite", ok,
             f"{len(runs)} instances, {len(bad)} failing checks, {elapsed:.1f} s")
    assert not bad, bad[:10]
    assert elapsed <= 60


def test_criterion_2_corollary_suite(theorem_runs, announce):
    runs, _ = theorem_runs
    bad, chains = [], 0
    for k, p, t, rep in runs:
        if rep is None:
            bad.append((k, "incomplete"))
            continue
        bad.extend((k, cid) for cid in COROLLARY if cid in rep and rep[cid].status not in ("pass", "n/a"))
        if p.N is not None and rep.mode["triangle"]:
            chains += 1
            for ante, cons in (("c4-22", "c4-21"), ("c4-21", "c6-4"), ("c4-12", "c4-11")):
                if rep[ante].status == "pass" and rep[cons].status != "pass":
                    bad.append((k, f"{ante}=>{cons}"))
            if rep["p44"].status != "pass":
                bad.append((k, "p44"))
    announce(2, "corollary suite", not bad,
             f"{len(runs)} runs, {chains} implication chains checked, {len(bad)} failing checks")
    assert not bad, bad[:10]


def test_criterion_3_ekeland_oracle(announce):
    r = run_ekeland(ek3_space(), [1.0, 0.4, 0.0], PolyhedralCone.orthant(1), [1.0], eps=1.0, lam=2.0)
    hand = (
        r.trace.xbar == 2
        and abs(r.report["ek-i"].witnesses["d_xbar_x0"] - 2.0) <= 1e-12
        and abs(r.report["ek-i"].residual) <= 1e-12
        and abs(r.report["ek-ii"].residual) <= 1e-12
        and r.report.passed
    )
    misses = []
    for s in range(200):
        q = gen_instance(20000 + s, 1 + s % 25, 1, "orthant", "metric_power:1", 1,
                         "tight" if s % 4 == 0 else "slack")
        lam = (0.25, 0.7, 1.0, 3.0)[s % 4]
        run = run_ekeland(q.space, q.f, q.cone, q.cbar, q.eps, lam, q.x0, TOL)
        feasible = ekeland_oracle(q.space.dist.tolist(), q.f[:, 0].tolist(), q.x0, q.eps, lam)
        if run.trace.xbar not in feasible or not run.report.passed:
            misses.append(s)
    ok = hand and not misses
    announce(3, "Ekeland oracle equivalence", ok,
             f"hand instance {'exact' if hand else 'MISMATCH'}, {200 - len(misses)}/200 in oracle set")
    assert hand
    assert not misses, misses


def image_oracle(f, xbar, eps, cone):
    for y in f:
        if np.all(cone.facet_normals @ (f[xbar] - y) >= -TOL):
            _, dist = nnls(cone.generators.T, y - f[xbar])
            if dist > eps + TOL:
                return False
    return True


def test_criterion_4_minimality(announce):
    rng = np.random.Generator(np.random.PCG64(4))
    bad = []
    for s in range(300):
        n, m = int(rng.integers(1, 13)), int(rng.integers(1, 4))
        q = gen_instance(30000 + s, n, m, ("orthant", "random-pointed")[s % 2])
        f, C, c = q.f, q.cone, q.cbar
        for x in range(n):
            level = min_eps(f, x, C)
            if not is_eps_minimal(f, x, level, C):
                bad.append((s, x, "min_eps pass"))
            if level > 0 and is_eps_minimal(f, x, level - 10 * TOL, C):
                bad.append((s, x, "min_eps fail"))
            for eps in (0.0, 0.5 * level, level, 1.5 * level, 0.1, 0.5, 1.0, 2.0):
                std = is_eps_minimal(f, x, eps, C)
                if std != image_oracle(f, x, eps, C):
                    bad.append((s, x, eps, "image characterization"))
                for mode in (MinimalityMode.GLOBAL, MinimalityMode.TANAKA):
                    if is_eps_minimal(f, x, eps, C, mode) and not std:
                        bad.append((s, x, eps, mode.value))
                if std and not check_p26_directional(f, x, eps, c, C):
                    bad.append((s, x, eps, "directional"))
    announce(4, "minimality characterizations", not bad, f"300 instances, {len(bad)} violations")
    assert not bad, bad[:10]


def perturbed_objective(q, trace, delta, scale, p):
    e = np.asarray(q.space.embedding, dtype=float)
    pts, xbar = trace.points, trace.xbar
    tail = delta(len(pts)) / (1.0 - delta.ratio)
    vals = []
    for x in range(q.n):
        g = sum(delta(i) * np.linalg.norm(e[x] - e[pts[i]]) ** p for i in range(len(pts)))
        g += np.linalg.norm(e[x] - e[xbar]) ** p * tail
        vals.append(float(q.f[x, 0]) + scale * g)
    return vals


def test_criterion_5_borwein_preiss(announce):
    bad, mutations, caught = [], 0, 0
    for s in range(100):
        p_exp = (0.5, 1.0, 2.0)[s % 3]
        q = gen_instance(40000 + s, 2 + s % 14, 1, "orthant", f"norm_power:{p_exp}", "inf")
        d0 = (1.0, 0.9, 0.6)[s % 3]
        level = min_eps(q.f, q.x0, q.cone)
        eps = level / d0 * 1.05 if level > 0 else 1.0
        delta = DeltaSequence((d0,), 0.5)
        lam = (0.5, 1.0, 2.0)[(s // 3) % 3]
        r = run_borwein_preiss(q.space, q.f, q.cone, q.cbar, eps, lam, p_exp, delta, x0=q.x0,
                               selection="approximate:0.5" if s % 2 else "exact")
        vals = perturbed_objective(q, r.trace, delta, eps / lam**p_exp, p_exp)
        best = int(np.argmin(vals))
        unique = all(v > vals[best] for x, v in enumerate(vals) if x != best)
        if not (r.report.passed and best == r.trace.xbar and unique
                and brute_force_certificate(r.problem, r.trace)):
            bad.append(s)
        for y in range(q.n):
            if y != r.trace.xbar:
                mutations += 1
                caught += not brute_force_certificate(r.problem, dataclasses.replace(r.trace, xbar=y))
    ok = not bad and caught == mutations
    announce(5, "Borwein-Preiss perturbed minimality", ok,
             f"{100 - len(bad)}/100 unique minimizers certified, {caught}/{mutations} mutations caught")
    assert not bad, bad
    assert caught == mutations


def cli_output(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out


def test_criterion_6_determinism(tmp_path, capsys, announce):
    bad = []
    paths = [tmp_path / "ek3.json"]
    paths[0].write_text(json.dumps(EK3_DOC), encoding="utf-8")
    for k in (7, 58, 101, 233, 377):
        p, _ = suite_instance(k)
        path = tmp_path / f"s{k}.json"
        path.write_text(dump_instance(p), encoding="utf-8")
        paths.append(path)
    for path in paths:
        for selection in ("exact", "approximate:0.5"):
            base = ["run", "--format", "machine", "--selection", selection, "--input", str(path)]
            _, first = cli_output(capsys, *base)
            _, second = cli_output(capsys, *base)
            stab = json.loads(first)["trace"]["stab_index"]
            outs = [cli_output(capsys, *base, "--horizon", str(stab + extra))[1] for extra in (1, 5, 50)]
            if any(o != first for o in [second] + outs):
                bad.append((path.name, selection))
    p, _ = suite_instance(7)
    for selection in ("exact", "approximate:0.5"):
        t1 = run_construction(p, selection=selection)
        t2 = run_construction(p, selection=selection, horizon=t1.stab_index + 9)
        if emit_report(p, t1, verify(p, t1), "text") != emit_report(p, t2, verify(p, t2), "text"):
            bad.append(("text", selection))
    gens = []
    for _ in range(2):
        proc = subprocess.run([sys.executable, "-m", "vecvp.cli", "gen", "--seed", "1", "--n", "5", "--m", "2"],
                              capture_output=True, check=True)
        gens.append(proc.stdout)
    digest = hashlib.sha256(gens[0]).hexdigest()
    if gens[0] != gens[1] or digest != GEN_SHA256:
        bad.append(("gen", digest))
    if dump_instance(gen_instance(123, 17, 3, "random-pointed", "matrix", 5)) != \
            dump_instance(gen_instance(123, 17, 3, "random-pointed", "matrix", 5)):
        bad.append(("gen", 123))
    announce(6, "determinism and stability", not bad,
             f"{len(paths)} instance files x 2 selections, gen digest {'pinned' if digest == GEN_SHA256 else 'CHANGED'}")
    assert not bad, bad
