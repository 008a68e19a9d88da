"""The inductive construction behind the vector Borwein-Preiss principle, and its checks.

Given an instance, :func:`run_construction` scalarizes with a unit dual
functional ``y*`` (``lambda* = <y*, cbar>``), starts from

    S_0 = {x : f(x_0) - f(x) - delta_0 rho(x, x_0) cbar in C}

and for ``i = 1, 2, ...`` with ``j_i = min(i, N - 1)`` picks ``x_i`` in
``S_{i-1}`` whose scalarized value

    phi_i(x) = <y*, f(x)> + lambda* sum_{k < j_i} delta_k rho(x, x_k)

is below ``inf phi_i + lambda* delta_{j_i} eps_i``, then keeps

    S_i = {x in S_{i-1} : f(x_i) - f(x)
           - (sum_{k < j_i} delta_k (rho(x, x_k) - rho(x_i, x_k))
              + delta_{j_i} rho(x, x_i)) cbar in C}.

On a finite space the nested sets reach a singleton ``{xbar}``; from then on
``x_i = xbar``. Every infinite series in the conclusions therefore has
finitely many nonzero terms (or a geometric tail in ``delta``), and every
supremum over ``n`` is attained by ``n = stab_index``. The verification
window ``W = max(stab_index, N) + 1`` covers all distinct cases: past it
each checked expression is either constant in ``m`` or moves monotonically
deeper into the region where the check holds.
"""
import math
from dataclasses import dataclass

import numpy as np

from .cones import DEFAULT_TOL, boundary_distance, cone_margin, cone_margins, select_dual_functional
from .exceptions import IncompleteTraceError
from .problem import validate_problem
from .report import FAIL, INFO, PASS, VACUOUS, Claim, VerificationReport
from .spaces import check_triangle


def parse_selection(selection):
    """``"exact"`` or ``"approximate:<share>"`` with ``0 < share <= 1``."""
    if isinstance(selection, tuple):
        kind, share = selection
    elif selection == "exact":
        kind, share = "exact", None
    elif isinstance(selection, str) and selection.startswith("approximate:"):
        kind, share = "approximate", float(selection.split(":", 1)[1])
    else:
        raise ValueError(f"unknown selection rule {selection!r}")
    if kind == "exact":
        return "exact", None
    if kind != "approximate" or not 0 < share <= 1:
        raise ValueError("approximate selection needs a share in (0, 1]")
    return "approximate", float(share)


def selection_name(selection):
    kind, share = parse_selection(selection)
    return "exact" if kind == "exact" else f"approximate:{share!r}"


@dataclass(frozen=True)
class Step:
    """Record of the choice of ``x_i``: its value, the infimum and the allowed slack."""

    i: int
    j: int
    chosen: int
    phi_chosen: float
    phi_inf: float
    slack: float


@dataclass(eq=False)
class VPTrace:
    """Execution record of :func:`run_construction`.

    ``points[i]`` is ``x_i`` and ``sets[i]`` is ``S_i`` for the iterations
    actually run; past ``stab_index`` both stay at ``xbar``.
    """

    dual: object
    points: list
    sets: list
    j_seq: list
    steps: list
    xbar: int | None
    stab_index: int | None
    selection: str
    assumed_hypotheses: bool = False

    @property
    def complete(self):
        return self.xbar is not None

    @property
    def iterations(self):
        return len(self.points) - 1

    def point(self, i):
        if i < len(self.points):
            return self.points[i]
        if not self.complete:
            raise IncompleteTraceError(f"x_{i} was never constructed")
        return self.points[-1]

    def in_set(self, x, m):
        if m < len(self.sets):
            return x in self.sets[m]
        if not self.complete:
            raise IncompleteTraceError(f"S_{m} was never constructed")
        return x == self.points[-1]

    def exit_index(self, x):
        """First ``m`` with ``x`` outside ``S_m``; ``None`` for ``xbar``."""
        for m, s in enumerate(self.sets):
            if x not in s:
                return m
        return None


def _weighted(delta, row, points, j):
    s = 0.0
    for k in range(j):
        s += delta(k) * row[points[k]]
    return s


def run_construction(p, horizon=None, tol=DEFAULT_TOL, selection="exact", assume_hypotheses=False):
    """Run the nested-set construction on ``p``.

    Parameters
    ----------
    p : VPProblem
    horizon : int, optional
        Maximum number of iterations ``i >= 1``; defaults to ``10 * n``.
    selection : str
        ``"exact"`` picks the minimizer of ``phi_i`` (lowest index on ties).
        ``"approximate:<share>"`` picks the lowest-index point within
        ``share * lambda* delta_{j_i} eps_i`` of the infimum.
    assume_hypotheses : bool
        Skip the ``eps``-minimality check on ``x_0`` and allow a boundary
        ``cbar``; estimate (i) is then informational only.

    Returns
    -------
    VPTrace
        ``trace.complete`` is false when the horizon ran out first.

    Raises
    ------
    HypothesisError
        If the instance violates an invariant or hypothesis.
    """
    validate_problem(p, assume_hypotheses, tol)
    if horizon is None:
        horizon = 10 * p.n
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    kind, share = parse_selection(selection)
    dual = select_dual_functional(p.cone, p.cbar, tol, require_interior=not assume_hypotheses)
    lam = dual.lambda_star
    scal = [float(v) for v in p.f @ dual.ystar]
    rho = p.rho.tolist()
    delta = p.delta_seq
    N = p.N
    f, cbar, x0 = p.f, p.cbar, p.x0

    coef0 = np.array([delta(0) * rho[x][x0] for x in range(p.n)])
    s0 = np.flatnonzero(cone_margins(p.cone, f[x0] - f - coef0[:, None] * cbar) >= -tol)
    points, sets, j_seq, steps = [x0], [tuple(int(x) for x in s0)], [0], []
    stab = 0 if len(sets[0]) == 1 else None

    i = 0
    while stab is None and i < horizon:
        i += 1
        j = i if N is None else min(i, N - 1)
        prev = sets[-1]
        phi = [scal[x] + lam * _weighted(delta, rho[x], points, j) for x in prev]
        low = min(phi)
        slack = lam * delta(j) * p.eps_seq(i)
        if kind == "exact":
            pick = phi.index(low)
        else:
            pick = next(k for k, v in enumerate(phi) if v < low + share * slack)
        xi = prev[pick]
        coef = []
        for x in prev:
            s = 0.0
            for k in range(j):
                s += delta(k) * (rho[x][points[k]] - rho[xi][points[k]])
            coef.append(s + delta(j) * rho[x][xi])
        vals = f[xi] - f[list(prev)] - np.array(coef)[:, None] * cbar
        keep = cone_margins(p.cone, vals) >= -tol
        si = tuple(x for x, ok in zip(prev, keep) if ok)
        points.append(xi)
        sets.append(si)
        j_seq.append(j)
        steps.append(Step(i, j, xi, phi[pick], low, slack))
        if len(si) == 1:
            stab = i

    return VPTrace(
        dual=dual,
        points=points,
        sets=sets,
        j_seq=j_seq,
        steps=steps,
        xbar=None if stab is None else points[-1],
        stab_index=stab,
        selection=selection_name(selection),
        assumed_hypotheses=assume_hypotheses,
    )


class _Eval:
    """Shared evaluation helpers over a completed trace."""

    def __init__(self, p, t, tol):
        if not t.complete:
            raise IncompleteTraceError("trace did not stabilize within its horizon")
        self.p, self.t, self.tol = p, t, tol
        self.rho = p.rho.tolist()
        self.N = p.N
        self.xbar = t.xbar
        self.stab = t.stab_index
        self.top = max(self.stab, self.N or 0) + 1

    def x(self, i):
        return self.t.point(i)

    def d(self, i):
        return self.p.delta_seq(i)

    def r(self, a, b):
        return self.rho[a][b]

    def vec(self, a, b, coef):
        """``f(a) - f(b) - coef * cbar``."""
        return self.p.f[a] - self.p.f[b] - coef * self.p.cbar

    def margin(self, v):
        return cone_margin(self.p.cone, v)

    def wsum(self, point, hi, lo=0):
        """``sum_{k=lo}^{hi} delta_k rho(point, x_k)`` (zero when ``hi < lo``)."""
        s = 0.0
        for k in range(lo, hi + 1):
            s += self.d(k) * self.r(point, self.x(k))
        return s

    def path(self, lo, hi):
        """``sum_{i=lo}^{hi} rho(x_{i+1}, x_i)``."""
        s = 0.0
        for i in range(lo, hi + 1):
            s += self.r(self.x(i + 1), self.x(i))
        return s

    def path_tail(self, lo):
        """``sum_{i >= lo} rho(x_{i+1}, x_i)``; terms vanish from ``stab_index`` on."""
        return self.path(lo, self.stab - 1)

    def sup_tail(self, base, lo):
        """``sup_{n >= lo} (sum_{i=base}^{n-1} rho(x_{i+1}, x_i) + rho(xbar, x_n))``.

        Constant for ``n >= stab_index``, so the range ``[lo, max(lo, stab)]``
        attains it. Returns ``(value, argmax n)``.
        """
        best, arg = -math.inf, lo
        for n in range(lo, max(lo, self.stab) + 1):
            v = self.path(base, n - 1) + self.r(self.xbar, self.x(n))
            if v > best:
                best, arg = v, n
        return best, arg

    def series(self, point):
        """``sum_{i >= 0} delta_i rho(point, x_i)``, ``inf`` when divergent."""
        head = self.wsum(point, self.stab - 1)
        tail_rho = self.r(point, self.xbar)
        if tail_rho == 0.0:
            return head
        tail = self.p.delta_seq.tail_sum(self.stab)
        return math.inf if math.isinf(tail) else head + tail_rho * tail

    def others(self):
        return [x for x in range(self.p.n) if x != self.xbar]


def _incl(ev, v):
    return ev.margin(v)


def _aggregate(cid, residuals, strict, tol, witnesses=None, note="", informational=False):
    """Fold per-check residuals into one claim (minimum residual decides)."""
    if not residuals:
        return Claim(cid, VACUOUS, None, witnesses or {}, note or "no instances to check")
    worst = min(residuals)
    ok = worst > tol if strict else worst >= -tol
    status = INFO if informational else (PASS if ok else FAIL)
    return Claim(cid, status, worst, witnesses or {}, note)


def _persistent(results, tol):
    """Smallest index from which every residual is a strict pass, else ``None``."""
    first = None
    for idx in range(len(results) - 1, -1, -1):
        if results[idx] > tol:
            first = idx
        else:
            break
    return first


def _check_nonincl_tail(ev, ms, build, tol):
    """Non-inclusion over ``m in ms`` for every ``x != xbar``.

    ``build(x, m)`` returns the vector that must lie outside ``C``. Returns
    ``(residuals, m0 pairs, failing points)``; the residual per point is the
    weakest margin over ``[m0, last]`` (or over all ``m`` if none persists).
    """
    residuals, m0s, bad = [], [], []
    for x in ev.others():
        res = [-ev.margin(build(x, m)) for m in ms]
        idx = _persistent(res, tol)
        if idx is None:
            bad.append(x)
            residuals.append(min(res))
        else:
            m0s.append([x, ms[idx]])
            residuals.append(min(res[idx:]))
    return residuals, m0s, bad


def verify_conclusions(p, t, tol=DEFAULT_TOL):
    """Check estimates (i)-(iv) and the construction's internal bounds.

    Claims: ``su2`` (selection slack), ``su6``/``su7`` (diameter bounds),
    ``nesting``, ``chain`` (the telescoped inclusions), ``thm-i``..``thm-iv``.
    """
    ev = _Eval(p, t, tol)
    rep = VerificationReport(mode={"N_finite": p.N is not None})
    lam = t.dual.lambda_star
    d0 = ev.d(0)
    bd = boundary_distance(p.cone, p.cbar, tol)
    xbar, x0, N = ev.xbar, p.x0, ev.N
    assumed = t.assumed_hypotheses

    rep.add(_aggregate(
        "su2", [s.phi_inf + s.slack - s.phi_chosen for s in t.steps], True, tol,
        note="selection strictly within lambda*delta_j*eps_i of the infimum",
    ))

    scal_bound = p.eps / (lam * d0)
    res = [scal_bound - ev.r(x, x0) for x in t.sets[0]]
    if bd > 0:
        res.append(p.eps / (d0 * bd) - scal_bound)
    rep.add(_aggregate("su6", res, False, tol, informational=assumed))

    res = []
    for i in range(1, len(t.sets)):
        xi = t.points[i]
        res.extend(p.eps_seq(i) - ev.r(x, xi) for x in t.sets[i])
    rep.add(_aggregate("su7", res, True, tol))

    bad = 0
    for i in range(1, len(t.sets)):
        if not set(t.sets[i]) <= set(t.sets[i - 1]):
            bad += 1
        if t.points[i] not in t.sets[i - 1] or t.points[i] not in t.sets[i]:
            bad += 1
    if t.points[0] not in t.sets[0] or t.sets[-1] != (xbar,):
        bad += 1
    rep.add(Claim("nesting", PASS if bad == 0 else FAIL, float(-bad)))

    res = []
    for n in range(1, ev.top + 1):
        for m in range(n):
            res.append(ev.margin(_chain_vector(ev, m, n)))
    rep.add(_aggregate("chain", res, False, tol, note=f"all 0<=m<n<={ev.top}"))

    # (i)
    if bd > 0:
        bound = p.eps / (d0 * bd)
        value = ev.r(xbar, x0)
        rep.add(_aggregate(
            "thm-i", [bound - value], False, tol,
            witnesses={"rho_xbar_x0": value, "bound": bound},
            informational=assumed,
        ))
    else:
        rep.add(Claim("thm-i", INFO, None, note="cbar not interior: estimate dropped"))

    # (ii)
    res = [p.eps_seq(i) - ev.r(xbar, ev.x(i)) for i in range(1, ev.top + 1)]
    rep.add(_aggregate("thm-ii", res, True, tol, note=f"i=1..{ev.top}; rho(xbar,x_i)=0 beyond"))

    # (iii)
    if N is None:
        total = ev.series(xbar)
        v = ev.vec(x0, xbar, total)
        rep.add(_aggregate(
            "thm-iii", [ev.margin(v)], False, tol,
            witnesses={"series": total, "nonzero_terms_until": ev.stab},
        ))
    else:
        head = ev.wsum(xbar, N - 2)
        sup, arg = ev.sup_tail(N - 1, N - 1)
        v = ev.vec(x0, xbar, head + ev.d(N - 1) * sup)
        rep.add(_aggregate(
            "thm-iii", [ev.margin(v)], False, tol,
            witnesses={"sup": sup, "sup_at_n": arg, "path_series": ev.path_tail(N - 1)},
        ))

    # (iv)
    if N is None:
        sbar = ev.series(xbar)
        ms = list(range(0, ev.top + 1))
        res, m0s, bad = _check_nonincl_tail(
            ev, ms, lambda x, m: ev.vec(xbar, x, ev.wsum(x, m) - sbar), tol
        )
        note = "m0 searched from 0; expression is monotone in m"
    else:
        head = ev.wsum(xbar, N - 2)
        ms = list(range(N, max(N, ev.stab) + 1))

        def build(x, m):
            sup, _ = ev.sup_tail(m, m)
            coef = ev.wsum(x, N - 2) + ev.d(N - 1) * ev.r(x, ev.x(m)) - head - ev.d(N - 1) * sup
            return ev.vec(xbar, x, coef)

        res, m0s, bad = _check_nonincl_tail(ev, ms, build, tol)
        note = f"m0 >= N; expression constant for m >= {max(N, ev.stab)}"
    wit = {"m0": m0s}
    if bad:
        wit["failing_points"] = bad
    rep.add(_aggregate("thm-iv", res, True, tol, witnesses=wit, note=note))
    return rep


def _chain_vector(ev, m, n):
    """The summed inclusion for ``0 <= m < n``, in the case ``N`` selects."""
    N = ev.N
    xbar, xm = ev.xbar, ev.x(m)
    back = ev.wsum(xm, m - 1)
    if N is None or N > n:
        coef = ev.wsum(xbar, n) - back
    elif N <= m:
        coef = (
            ev.wsum(xbar, N - 2) - ev.wsum(xm, N - 2)
            + ev.d(N - 1) * (ev.path(m, n - 1) + ev.r(xbar, ev.x(n)))
        )
    else:
        coef = (
            ev.wsum(xbar, N - 2) - back
            + ev.d(N - 1) * (ev.path(N - 1, n - 1) + ev.r(xbar, ev.x(n)))
        )
    return ev.vec(xm, xbar, coef)


def verify_corollaries(p, t, tol=DEFAULT_TOL):
    """Check the corollary conditions that apply to this instance.

    ``N`` infinite: ``c3-ss10``. ``N`` finite: ``c4-11``, ``c4-12``,
    ``c4-21``, ``c4-22``, ``c4-ss10-2`` and ``r18-su10plus``; with a gauge
    satisfying the triangle inequality also ``c6-4`` and ``p44`` (the
    implication chain between the conditions).
    """
    ev = _Eval(p, t, tol)
    triangle = check_triangle(p.gauge, p.space, tol)
    rep = VerificationReport(mode={"N_finite": p.N is not None, "triangle": triangle})
    xbar, x0, N = ev.xbar, p.x0, ev.N

    if N is None:
        sbar = ev.series(xbar)
        res, divergent = [], []
        for x in ev.others():
            sx = ev.series(x)
            if math.isinf(sx):
                divergent.append(x)
                continue
            res.append(-ev.margin(ev.vec(xbar, x, sx - sbar)))
        claim = _aggregate(
            "c3-ss10", res, True, tol,
            witnesses={"divergent_points": divergent} if divergent else {},
        )
        if divergent:
            claim.note = "vacuous at points whose perturbation series diverges"
        rep.add(claim)
        return rep

    dN = ev.d(N - 1)
    head = ev.wsum(xbar, N - 2)
    last = max(N, ev.stab)
    ms = list(range(N, last + 1))

    rep.add(_aggregate("c4-11", [ev.margin(ev.vec(x0, xbar, ev.wsum(xbar, N - 1)))], False, tol))
    rep.add(_aggregate(
        "c4-12", [ev.margin(ev.vec(x0, xbar, head + dN * ev.path_tail(N - 1)))], False, tol
    ))

    per_point = {}
    for cid, tail in (
        ("c4-21", lambda m: ev.r(xbar, ev.x(m))),
        ("c4-22", lambda m: ev.path_tail(m)),
    ):
        def build(x, m, tail=tail):
            coef = ev.wsum(x, N - 2) + dN * ev.r(x, ev.x(m)) - head - dN * tail(m)
            return ev.vec(xbar, x, coef)

        res, m0s, bad = _check_nonincl_tail(ev, ms, build, tol)
        wit = {"m0": m0s}
        if bad:
            wit["failing_points"] = bad
        rep.add(_aggregate(cid, res, True, tol, witnesses=wit))
        per_point[cid] = set(ev.others()) - set(bad)

    def c64_vector(x):
        return ev.vec(xbar, x, ev.wsum(x, N - 2) + dN * ev.r(x, xbar) - head)

    res = [-ev.margin(c64_vector(x)) for x in range(p.n)]
    rep.add(_aggregate("c4-ss10-2", res, False, tol, note="not in Int C, all x"))

    sup, _ = ev.sup_tail(N - 1, N)
    res, checked = [], 0
    for x in ev.others():
        start = t.exit_index(x)
        for m in range(start, N):
            coef = ev.wsum(x, m) - head - dN * sup
            res.append(-ev.margin(ev.vec(xbar, x, coef)))
            checked += 1
    rep.add(_aggregate(
        "r18-su10plus", res, True, tol, witnesses={"checks": checked},
        note="m from first exit of x up to N-1",
    ))

    if triangle:
        res, bad = [], []
        for x in ev.others():
            r = -ev.margin(c64_vector(x))
            res.append(r)
            if not r > tol:
                bad.append(x)
        per_point["c6-4"] = set(ev.others()) - set(bad)
        rep.add(_aggregate("c6-4", res, True, tol,
                           witnesses={"failing_points": bad} if bad else {}))

        broken = []
        for ante, cons in (("c4-12", "c4-11"), ("c4-22", "c4-21"), ("c4-21", "c6-4")):
            if rep[ante].status == PASS and rep[cons].status != PASS:
                broken.append(f"{ante}=>{cons}")
            if ante in per_point and cons in per_point:
                for x in sorted(per_point[ante] - per_point[cons]):
                    broken.append(f"{ante}=>{cons}@{x}")
        tele = [ev.path_tail(m) - ev.r(xbar, ev.x(m)) for m in range(0, ev.top + 1)]
        worst = min(tele)
        if worst < -tol:
            broken.append("rho(xbar,x_m)<=sum_{i>=m} rho(x_{i+1},x_i)")
        rep.add(Claim(
            "p44", PASS if not broken else FAIL, worst,
            {"broken": broken} if broken else {},
            "c4-12=>c4-11, c4-22=>c4-21=>c6-4",
        ))
    return rep


def verify(p, t, tol=DEFAULT_TOL):
    """All theorem and corollary claims for a completed trace."""
    rep = verify_conclusions(p, t, tol)
    return rep.extend(verify_corollaries(p, t, tol))
