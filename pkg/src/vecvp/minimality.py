"""Sublevel sets and approximate minimality for ``f : X -> R^m`` on a finite space.

Every set is computed by enumerating the points of ``X``. Memberships use
the tolerance-relaxed cone test of :mod:`vecvp.cones`; point sets are
returned as sorted tuples of point indices.

``rho`` arguments are full ``n x n`` gauge tables (see
:func:`vecvp.spaces.gauge_matrix`), with ``rho[x, xbar]`` the gauge from the
candidate ``x`` to the reference point.
"""
import enum

import numpy as np

from .cones import (
    DEFAULT_TOL,
    boundary_distance,
    cone_interior_contains,
    cone_margins,
    distances_to_cone,
)
from .exceptions import ConeError, DimensionError, HypothesisError


class MinimalityMode(enum.Enum):
    STANDARD = "standard"
    GLOBAL = "global"
    TANAKA = "tanaka"
    DIRECTIONAL = "directional"


def as_objective(values, m=None):
    """Objective table as a read-only ``(n, m)`` float array."""
    f = np.array(values, dtype=np.float64)
    if f.ndim == 1:
        f = f.reshape(-1, 1)
    if f.ndim != 2 or f.shape[0] == 0:
        raise DimensionError("objective must be a nonempty table of vectors")
    if m is not None and f.shape[1] != m:
        raise DimensionError(f"objective vectors have dimension {f.shape[1]}, cone {m}")
    if not np.all(np.isfinite(f)):
        raise DimensionError("objective has non-finite entries")
    f.flags.writeable = False
    return f


def _members(mask):
    return tuple(int(i) for i in np.flatnonzero(mask))


def _check(f, C):
    f = as_objective(f)
    if f.shape[1] != C.dim:
        raise DimensionError(f"objective dimension {f.shape[1]} does not match cone {C.dim}")
    return f


def lower_sublevel(f, ybar, C, tol=DEFAULT_TOL):
    """``{x : ybar - f(x) in C}``."""
    f = _check(f, C)
    return _members(cone_margins(C, np.asarray(ybar, dtype=np.float64) - f) >= -tol)


def upper_sublevel(f, ybar, C, tol=DEFAULT_TOL):
    """``{x : f(x) - ybar in C}``."""
    f = _check(f, C)
    return _members(cone_margins(C, f - np.asarray(ybar, dtype=np.float64)) >= -tol)


def _upper_eps_mask(f, xbar, eps, C, tol):
    diff = f - f[xbar]
    return (cone_margins(C, diff) >= -tol) | (distances_to_cone(C, diff) <= eps + tol)


def eps_upper_sublevel(f, xbar, eps, C, tol=DEFAULT_TOL):
    """``{x : f(x) - f(xbar) in C + eps*B}``.

    Membership is ``dist(f(x) - f(xbar), C) <= eps`` (relaxed by ``tol``);
    points passing the plain cone test are always included, so ``eps = 0``
    gives exactly :func:`upper_sublevel`.
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    f = _check(f, C)
    return _members(_upper_eps_mask(f, xbar, eps, C, tol))


def gauge_lower_sector(f, xbar, rho, c, C, scale=1.0, tol=DEFAULT_TOL):
    """``{x : f(xbar) - f(x) - scale*rho(x, xbar)*c in C}``."""
    if not scale > 0:
        raise ValueError("scale must be positive")
    f = _check(f, C)
    rho = np.asarray(rho, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64).reshape(C.dim)
    vals = f[xbar] - f - (scale * rho[:, xbar])[:, None] * c[None, :]
    return _members(cone_margins(C, vals) >= -tol)


def _directional_hits(f, xbar, eps, cbar, C, tol):
    w = f[xbar] - f - eps * cbar[None, :]
    inside = cone_margins(C, w) >= -tol
    nonzero = np.sqrt(np.sum(w * w, axis=1)) > tol
    return inside & nonzero


def _need_direction(C, cbar):
    if cbar is None:
        raise ValueError("directional mode needs a direction cbar")
    cbar = np.asarray(cbar, dtype=np.float64).reshape(C.dim)
    if not np.any(cbar != 0.0):
        raise ValueError("directional mode needs a nonzero direction")
    if cone_margins(C, cbar[None, :])[0] < -DEFAULT_TOL:
        raise ConeError("direction must lie in the cone")
    return cbar


def is_eps_minimal(f, xbar, eps, C, mode=MinimalityMode.STANDARD, cbar=None, tol=DEFAULT_TOL):
    """Whether ``xbar`` is an ``eps``-minimal point of ``f`` in the given sense.

    STANDARD: ``S^<=(f, xbar)`` is inside ``S_eps^>=(f, xbar)``.
    GLOBAL: ``f(X)`` is inside ``f(xbar) + C + eps*B``.
    TANAKA: ``f(X) ∩ (f(xbar) - C)`` is inside ``f(xbar) + eps*B``.
    DIRECTIONAL: ``f(X) ∩ (f(xbar) - C∖{0} - eps*cbar)`` is empty.
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    f = _check(f, C)
    mode = MinimalityMode(mode)
    if mode is MinimalityMode.DIRECTIONAL:
        cbar = _need_direction(C, cbar)
        return not bool(np.any(_directional_hits(f, xbar, eps, cbar, C, tol)))
    below = cone_margins(C, f[xbar] - f) >= -tol
    if mode is MinimalityMode.STANDARD:
        return bool(np.all(_upper_eps_mask(f, xbar, eps, C, tol)[below]))
    if mode is MinimalityMode.GLOBAL:
        return bool(np.all(_upper_eps_mask(f, xbar, eps, C, tol)))
    diff = f[below] - f[xbar]
    return bool(np.all(np.sqrt(np.sum(diff * diff, axis=1)) <= eps + tol))


def is_eps_minimal_wrt(f, xbar, eps, rho, c, C, scale=1.0, tol=DEFAULT_TOL):
    """``S_{scale*rho, c}^<=(f, xbar)`` is inside ``S_eps^>=(f, xbar)``."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    sector = gauge_lower_sector(f, xbar, rho, c, C, scale, tol)
    upper = set(eps_upper_sublevel(f, xbar, eps, C, tol))
    return all(x in upper for x in sector)


def minimality_witness(f, xbar, eps, rho, c, C, scale=1.0, tol=DEFAULT_TOL):
    """First sector point outside ``S_eps^>=`` and its excess distance, or ``None``."""
    f = _check(f, C)
    sector = gauge_lower_sector(f, xbar, rho, c, C, scale, tol)
    mask = _upper_eps_mask(f, xbar, eps, C, tol)
    for x in sector:
        if not mask[x]:
            dist = float(distances_to_cone(C, (f[x] - f[xbar])[None, :])[0])
            return x, dist - eps
    return None


def min_eps(f, xbar, C, mode=MinimalityMode.STANDARD, cbar=None, tol=DEFAULT_TOL):
    """Smallest ``eps`` for which :func:`is_eps_minimal` holds.

    Closed forms: the largest cone distance over ``S^<=`` (STANDARD), over
    ``X`` (GLOBAL), or the largest norm gap over ``S^<=`` (TANAKA). These
    are attained. For DIRECTIONAL the value is an infimum: the condition
    holds for every larger ``eps`` but can fail at the value itself.
    """
    f = _check(f, C)
    mode = MinimalityMode(mode)
    if mode is MinimalityMode.DIRECTIONAL:
        cbar = _need_direction(C, cbar)
        v = f[xbar] - f
        inside = cone_margins(C, v) >= -tol
        rates = C.facet_normals @ cbar
        pos = rates > tol
        best = 0.0
        for x in np.flatnonzero(inside):
            level = float(np.min((C.facet_normals[pos] @ v[x]) / rates[pos]))
            best = max(best, level)
        return best
    if mode is MinimalityMode.GLOBAL:
        diff = f - f[xbar]
        return float(np.max(distances_to_cone(C, diff)))
    below = cone_margins(C, f[xbar] - f) >= -tol
    diff = f[below] - f[xbar]
    if mode is MinimalityMode.STANDARD:
        return float(np.max(distances_to_cone(C, diff)))
    return float(np.max(np.sqrt(np.sum(diff * diff, axis=1))))


def check_p26_directional(f, xbar, eps, c, C, tol=DEFAULT_TOL):
    """Directional consequence of standard ``eps``-minimality.

    With ``xi = eps / d(c, R^m ∖ C)``, no ``f(x)`` may lie in
    ``f(xbar) - C∖{0} - xi*c``. Returns whether that holds.

    Raises
    ------
    ConeError
        If ``c`` is not interior.
    HypothesisError
        If ``xbar`` is not ``eps``-minimal.
    """
    f = _check(f, C)
    c = np.asarray(c, dtype=np.float64).reshape(C.dim)
    if not cone_interior_contains(C, c, tol):
        raise ConeError("direction must be an interior point of the cone")
    if not is_eps_minimal(f, xbar, eps, C, tol=tol):
        raise HypothesisError(f"point {xbar} is not {eps}-minimal", "eps-minimal")
    xi = eps / boundary_distance(C, c)
    return not bool(np.any(_directional_hits(f, xbar, xi, c, C, tol)))


def check_c_lsc_witness(f, c, C, seq, epsseq, y, limit, tol=DEFAULT_TOL):
    """Test one sequence against C-lower semicontinuity with respect to ``c``.

    The premise is ``y - f(x_k) - eps_k*c in C`` for every ``k``, with the
    sequence eventually constant at ``limit`` (convergence in a finite space)
    and ``eps_k`` ending at zero. Returns whether ``y - f(limit) in C``, or
    ``None`` when the premise fails and the sequence says nothing.
    """
    f = _check(f, C)
    seq = [int(s) for s in seq]
    epsseq = [float(e) for e in epsseq]
    if not seq or len(seq) != len(epsseq):
        raise ValueError("seq and epsseq must be nonempty and of equal length")
    y = np.asarray(y, dtype=np.float64).reshape(C.dim)
    c = np.asarray(c, dtype=np.float64).reshape(C.dim)
    if seq[-1] != limit or abs(epsseq[-1]) > tol:
        return None
    prem = y[None, :] - f[seq] - np.array(epsseq)[:, None] * c[None, :]
    if np.any(cone_margins(C, prem) < -tol):
        return None
    return bool(cone_margins(C, (y - f[limit])[None, :])[0] >= -tol)
