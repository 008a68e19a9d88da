"""Ekeland and Borwein-Preiss principles as parameter choices of the general construction.

Ekeland: ``rho = d``, ``N = 1``, ``delta_0 = eps/lam``, ``eps_i = eps/2^i``.

Borwein-Preiss: ``rho = |x - y|^p`` on an embedded space, ``N`` infinite, and
the rescaled data ``eps' = eps*delta_0``, ``eps_i' = eps_i^p``,
``delta_i' = (eps/lam^p) delta_i``.

Both runners check the hypotheses in their own form, run the construction,
then report the theorem claims together with the conclusions restated for that principle
(``ek-i``..``ek-iii`` and ``bp-i``..``bp-iv``), evaluated directly from the
original data rather than through the rescaled instance.
"""
import math
from dataclasses import dataclass

from .cones import DEFAULT_TOL, boundary_distance
from .engine import _Eval, _aggregate, _check_nonincl_tail, run_construction, verify
from .exceptions import HypothesisError
from .minimality import is_eps_minimal
from .problem import DeltaSequence, EpsSequence, VPProblem
from .spaces import MetricPower, NormPower, euclid


@dataclass
class PrincipleRun:
    problem: VPProblem
    trace: object
    report: object


def ekeland_problem(space, f, cone, cbar, eps, lam, x0=0, name="ekeland"):
    """The instance the Ekeland principle reduces to."""
    if not lam > 0:
        raise HypothesisError("lam must be positive", "lam")
    if not eps > 0:
        raise HypothesisError("eps must be positive", "eps")
    return VPProblem(
        space=space,
        gauge=MetricPower(1.0),
        cone=cone,
        cbar=cbar,
        f=f,
        x0=x0,
        eps=eps,
        eps_seq=EpsSequence((eps / 2,), 0.5),
        delta_seq=DeltaSequence.finite([eps / lam]),
        name=name,
    )


def run_ekeland(space, f, cone, cbar, eps, lam, x0=0, tol=DEFAULT_TOL, horizon=None,
                selection="exact", assume_hypotheses=False, name="ekeland"):
    """Vector Ekeland principle on a finite metric space.

    Returns
    -------
    PrincipleRun
        The report holds the theorem claims plus ``ek-i`` (distance bound
        ``d(xbar, x0) <= lam / d(cbar, R^m minus C)``), ``ek-ii`` (descent
        from ``x0``) and ``ek-iii`` (strict minimality of ``xbar`` for the
        perturbed objective).
    """
    p = ekeland_problem(space, f, cone, cbar, eps, lam, x0, name)
    if not assume_hypotheses and not is_eps_minimal(p.f, p.x0, eps, cone, tol=tol):
        raise HypothesisError(f"x0={p.x0} is not an {eps}-minimal point", "x0-eps-minimal")
    t = run_construction(p, horizon, tol, selection, assume_hypotheses)
    if not t.complete:
        return PrincipleRun(p, t, None)
    rep = verify(p, t, tol)
    xbar, d = t.xbar, space.dist
    k = eps / lam
    bd = boundary_distance(cone, p.cbar, tol)
    ev = _Eval(p, t, tol)

    if bd > 0:
        rep.add(_aggregate("ek-i", [lam / bd - float(d[xbar, p.x0])], False, tol,
                           witnesses={"d_xbar_x0": float(d[xbar, p.x0]), "bound": lam / bd},
                           informational=assume_hypotheses))
    rep.add(_aggregate("ek-ii", [ev.margin(ev.vec(p.x0, xbar, k * float(d[xbar, p.x0])))],
                       False, tol))
    res = [-ev.margin(ev.vec(xbar, x, k * float(d[x, xbar]))) for x in ev.others()]
    rep.add(_aggregate("ek-iii", res, True, tol))
    rep.mode["corollary"] = "ekeland"
    return PrincipleRun(p, t, rep)


def borwein_preiss_problem(space, f, cone, cbar, eps, lam, p_exp, delta_seq,
                           eps_seq=None, x0=0, name="borwein-preiss"):
    """The rescaled instance the Borwein-Preiss principle reduces to."""
    if space.embedding is None:
        raise HypothesisError("Borwein-Preiss needs an embedded space", "gauge-embedding")
    if not (lam > 0 and p_exp > 0 and eps > 0):
        raise HypothesisError("lam, p and eps must be positive", "bp-parameters")
    if delta_seq.N is not None:
        raise HypothesisError("Borwein-Preiss needs delta_i > 0 for every i", "delta-seq")
    if eps_seq is None:
        eps_seq = EpsSequence((eps / 2,), 0.5)
    scale = eps / lam**p_exp
    return VPProblem(
        space=space,
        gauge=NormPower(float(p_exp)),
        cone=cone,
        cbar=cbar,
        f=f,
        x0=x0,
        eps=eps * delta_seq(0),
        eps_seq=EpsSequence(tuple(e**p_exp for e in eps_seq.head), eps_seq.ratio**p_exp),
        delta_seq=DeltaSequence(tuple(scale * v for v in delta_seq.head), delta_seq.ratio),
        name=name,
    )


def run_borwein_preiss(space, f, cone, cbar, eps, lam, p_exp, delta_seq, eps_seq=None, x0=0,
                       tol=DEFAULT_TOL, horizon=None, selection="exact",
                       assume_hypotheses=False, name="borwein-preiss"):
    """Vector Borwein-Preiss principle with ``rho = |x - y|^p``.

    Parameters
    ----------
    delta_seq : DeltaSequence
        The unscaled weights ``delta_i``; must be infinite (geometric tail).
    eps_seq : EpsSequence, optional
        The radii ``eps_i``; defaults to ``eps / 2^i``.

    Returns
    -------
    PrincipleRun
        Theorem claims plus ``bp-i`` (norm bound), ``bp-ii`` (radii),
        ``bp-iii`` (descent) and ``bp-iv`` (the ``m``-form non-inclusion
        and the perturbed-minimality form with ``g = sum delta_i |x - x_i|^p``).
    """
    if eps_seq is None:
        eps_seq = EpsSequence((eps / 2,), 0.5)
    p = borwein_preiss_problem(space, f, cone, cbar, eps, lam, p_exp, delta_seq, eps_seq, x0, name)
    if not assume_hypotheses:
        for level in (eps, delta_seq(0) * eps):
            if not is_eps_minimal(p.f, p.x0, level, cone, tol=tol):
                raise HypothesisError(
                    f"x0={p.x0} is not a {level}-minimal point", "x0-eps-minimal"
                )
    t = run_construction(p, horizon, tol, selection, assume_hypotheses)
    if not t.complete:
        return PrincipleRun(p, t, None)
    rep = verify(p, t, tol)
    ev = _Eval(p, t, tol)
    emb = space.embedding.tolist()
    xbar = t.xbar
    k = eps / lam**p_exp

    def norm(a, b):
        return euclid(emb[a], emb[b])

    def g(x):
        head = 0.0
        for i in range(ev.stab):
            head += delta_seq(i) * norm(x, ev.x(i)) ** p_exp
        tail = norm(x, xbar) ** p_exp
        if tail == 0.0:
            return head
        rest = delta_seq.tail_sum(ev.stab)
        return math.inf if math.isinf(rest) else head + tail * rest

    bd = boundary_distance(cone, p.cbar, tol)
    if bd > 0:
        bound = lam / bd ** (1.0 / p_exp)
        rep.add(_aggregate("bp-i", [bound - norm(xbar, p.x0)], False, tol,
                           witnesses={"norm_xbar_x0": norm(xbar, p.x0), "bound": bound},
                           informational=assume_hypotheses))
    res = [eps_seq(i) - norm(xbar, ev.x(i)) for i in range(1, ev.top + 1)]
    rep.add(_aggregate("bp-ii", res, True, tol))
    gbar = g(xbar)
    rep.add(_aggregate("bp-iii", [ev.margin(ev.vec(p.x0, xbar, k * gbar))], False, tol,
                       witnesses={"g_xbar": gbar}))

    def partial(x, m):
        s = 0.0
        for i in range(m + 1):
            s += delta_seq(i) * norm(x, ev.x(i)) ** p_exp
        return s

    ms = list(range(0, ev.top + 1))
    res, m0s, bad = _check_nonincl_tail(
        ev, ms, lambda x, m: ev.vec(xbar, x, k * (partial(x, m) - gbar)), tol
    )
    ty_points = []
    for x in ev.others():
        gx = g(x)
        if math.isinf(gx):
            continue
        ty_points.append(x)
        res.append(-ev.margin(ev.vec(xbar, x, k * (gx - gbar))))
    wit = {"m0": m0s, "ty_points": ty_points}
    if bad:
        wit["failing_points"] = bad
    rep.add(_aggregate("bp-iv", res, True, tol, witnesses=wit))
    rep.mode["corollary"] = "borwein-preiss"
    return PrincipleRun(p, t, rep)
