"""Compare the compiled and pure-Python cone kernels.

Times ``margins`` and ``distances`` on random batches for a few cones, then
the end-to-end verification of generated instances under each backend (in
subprocesses, since the backend is fixed at import).

    python benchmarks/bench_kernels.py [--rows 2000] [--repeat 5] [--instances 100]
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from vecvp import PolyhedralCone, kernels

E2E = """
import time
from vecvp import gen_instance, run_construction, verify, kernels
t0 = time.perf_counter()
for k in range({count}):
    p = gen_instance(k, 2 + (7 * k) % 29, 1 + k % 3, ("orthant", "random-pointed")[k % 2],
                     ("metric_power:1", "metric_power:2", "matrix")[k % 3], (1, 2, 5, "inf")[k % 4])
    t = run_construction(p, selection="approximate:0.5" if k % 2 else "exact")
    verify(p, t)
print(kernels.BACKEND, time.perf_counter() - t0)
"""


def cones():
    yield "orthant R^2", PolyhedralCone.orthant(2)
    yield "simplicial R^3", PolyhedralCone.simplicial([[1.0, 0.2, -0.3], [0.1, 1.0, 0.2], [-0.2, 0.3, 1.0]])
    gens = [[np.cos(a), np.sin(a), 1.0] for a in np.linspace(0, 2 * np.pi, 6, endpoint=False)]
    yield "hexagonal R^3", PolyhedralCone.polygonal(gens)


def bench_kernels(rows, repeat):
    if kernels.BACKEND != "cython":
        print("compiled backend not available; build with `pip install -e . --no-build-isolation`")
        return
    fast, slow = kernels.load_backend("cython"), kernels.load_backend("python")
    rng = np.random.default_rng(0)
    print(f"{'kernel':10s} {'cone':16s} {'cython ms':>10s} {'python ms':>10s} {'speedup':>8s}")
    for name, C in cones():
        vals = np.ascontiguousarray(rng.uniform(-2, 2, size=(rows, C.dim)))
        A = np.ascontiguousarray(C.facet_normals)
        P = np.ascontiguousarray(C.projectors)
        jobs = {
            "margins": lambda mod: mod.margins(A, vals),
            "distances": lambda mod: mod.distances(A, P, vals, kernels.FEAS_REL),
        }
        for kname, job in jobs.items():
            assert np.array_equal(job(fast), job(slow))
            tf = min(timeit.repeat(lambda: job(fast), number=1, repeat=repeat)) * 1e3
            ts = min(timeit.repeat(lambda: job(slow), number=1, repeat=repeat)) * 1e3
            print(f"{kname:10s} {name:16s} {tf:10.3f} {ts:10.3f} {ts / tf:8.1f}x")


def bench_end_to_end(count):
    print(f"\nend to end: {count} generated instances, construction plus full verification")
    for flag in ("0", "1"):
        env = dict(os.environ, VECVP_PURE_PYTHON=flag)
        out = subprocess.run([sys.executable, "-c", E2E.format(count=count)],
                             capture_output=True, text=True, env=env, check=True).stdout.split()
        print(f"  {out[0]:7s} {float(out[1]):8.2f} s")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--instances", type=int, default=100)
    args = ap.parse_args(argv)
    bench_kernels(args.rows, args.repeat)
    bench_end_to_end(args.instances)


if __name__ == "__main__":
    main()
