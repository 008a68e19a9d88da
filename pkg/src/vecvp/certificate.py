"""Independent re-check of the final perturbed-minimality statements.

Nothing here goes through the engine or the kernel backends: the gauge is
rebuilt from the raw space data, cone membership is a plain ``A @ v``
against the facet normals, and the sums are written out afresh. The only
input taken from the trace is the sequence of chosen points and the
claimed limit ``xbar``.
"""
import math

import numpy as np

from .cones import DEFAULT_TOL
from .spaces import MatrixGauge, MetricPower, NormPower


def _gauge_table(p):
    g, S = p.gauge, p.space
    n = S.n
    if isinstance(g, MatrixGauge):
        return [[float(v) for v in row] for row in np.asarray(g.matrix)]
    if isinstance(g, MetricPower):
        return [[float(S.dist[a, b]) ** g.p for b in range(n)] for a in range(n)]
    if isinstance(g, NormPower):
        e = np.asarray(S.embedding, dtype=np.float64)
        return [[math.sqrt(float(np.sum((e[a] - e[b]) ** 2))) ** g.p for b in range(n)]
                for a in range(n)]
    raise TypeError(f"unknown gauge form {type(g).__name__}")


def brute_force_certificate(p, t, tol=DEFAULT_TOL):
    """Whether ``t.xbar`` satisfies the final statements of the principle.

    ``N`` infinite: ``f(x0) - f(xbar) - S(xbar) cbar`` is in ``C`` and, for
    every ``x != xbar`` with a convergent series ``S(x) = sum delta_i
    rho(x, x_i)``, ``f(xbar) + S(xbar) cbar - f(x) - S(x) cbar`` is not.

    ``N`` finite: the same with ``S(xbar)`` replaced by
    ``sum_{i<N-1} delta_i rho(xbar, x_i) + delta_{N-1} sup_n (...)`` and
    ``S(x)`` by its truncation at any ``m`` past the last recorded step.

    A trace without a limit gets ``False``.
    """
    if t.xbar is None or not t.points:
        return False
    rho = _gauge_table(p)
    A = np.asarray(p.cone.facet_normals, dtype=np.float64)
    f = np.asarray(p.f, dtype=np.float64)
    c = np.asarray(p.cbar, dtype=np.float64)
    pts = list(t.points)
    L = len(pts)
    xbar, x0, N = int(t.xbar), int(p.x0), p.N
    dl = p.delta_seq

    def pt(i):
        return pts[i] if i < L else pts[-1]

    def inside(v):
        return bool(np.all(A @ v >= -tol))

    def strictly_outside(v):
        return bool(np.min(A @ v) < -tol)

    if N is None:
        def series(x):
            s = sum(dl(i) * rho[x][pt(i)] for i in range(L))
            last = rho[x][pts[-1]]
            if last == 0.0:
                return s
            rest = dl.tail_sum(L)
            return math.inf if math.isinf(rest) else s + last * rest

        sbar = series(xbar)
        if math.isinf(sbar) or not inside(f[x0] - f[xbar] - sbar * c):
            return False
        for x in range(p.n):
            if x == xbar:
                continue
            sx = series(x)
            if math.isinf(sx):
                continue
            if not strictly_outside(f[xbar] + sbar * c - f[x] - sx * c):
                return False
        return True

    head = sum(dl(i) * rho[xbar][pt(i)] for i in range(N - 1))
    sup = -math.inf
    for n in range(N - 1, max(N - 1, L) + 1):
        walk = sum(rho[pt(i + 1)][pt(i)] for i in range(N - 1, n))
        sup = max(sup, walk + rho[xbar][pt(n)])
    level = head + dl(N - 1) * sup
    if not inside(f[x0] - f[xbar] - level * c):
        return False
    # past the recorded steps every x_n equals the last point, so the sup over
    # n >= m collapses to rho(xbar, last point)
    m = max(N, L)
    far = head + dl(N - 1) * rho[xbar][pt(m)]
    for x in range(p.n):
        if x == xbar:
            continue
        sx = sum(dl(i) * rho[x][pt(i)] for i in range(N - 1)) + dl(N - 1) * rho[x][pt(m)]
        if not strictly_outside(f[xbar] + far * c - f[x] - sx * c):
            return False
    return True
