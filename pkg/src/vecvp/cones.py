"""Polyhedral ordering cones in R^m.

A cone is given twice: by generators (``C = cone(g_1, ..., g_k)``) and by
unit facet normals (``C = {y : <a_j, y> >= 0}``). Instances supply both and
the constructor checks that they agree on the generators; no facet
enumeration is performed.

Distances to the cone are exact: the projection of ``y`` onto ``C`` lies in
the relative interior of some face, and the face's span is cut out by a
linearly independent subset of at most ``m`` active normals. All such subsets
are enumerated once per cone, which costs ``sum_{k<=m} binom(F, k)``
projectors for ``F`` facets (42 for ``F = 6, m = 3``; fine up to ``m = 6``).
"""
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np

from . import kernels
from .exceptions import ConeError, DimensionError

DEFAULT_TOL = 1e-9


def _as_matrix(rows, name):
    arr = np.array(rows, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ConeError(f"{name} must be a nonempty list of vectors")
    if not np.all(np.isfinite(arr)):
        raise ConeError(f"{name} contains non-finite entries")
    return arr


@dataclass(frozen=True, eq=False)
class PolyhedralCone:
    """Closed convex polyhedral cone with both representations.

    Parameters
    ----------
    generators : array_like, shape (k, m)
        Vectors whose conic hull is the cone.
    facet_normals : array_like, shape (F, m)
        Inward normals; rescaled to unit length on construction.
    """

    generators: np.ndarray
    facet_normals: np.ndarray

    def __post_init__(self):
        gens = _as_matrix(self.generators, "generators")
        normals = _as_matrix(self.facet_normals, "facet_normals")
        if gens.shape[1] != normals.shape[1]:
            raise DimensionError(
                f"generators have dimension {gens.shape[1]}, normals {normals.shape[1]}"
            )
        lengths = np.sqrt(np.sum(normals * normals, axis=1))
        if np.any(lengths == 0.0):
            raise ConeError("facet normal of zero length")
        # leave already-unit rows untouched so reloading saved normals is bit-exact
        lengths = np.where(np.abs(lengths - 1.0) <= 1e-12, 1.0, lengths)
        normals = normals / lengths[:, None]
        bad = np.argwhere(gens @ normals.T < -1e-9)
        if bad.size:
            g, j = bad[0]
            raise ConeError(
                f"representations disagree: generator {g} violates facet normal {j}"
            )
        gens.flags.writeable = False
        normals.flags.writeable = False
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "facet_normals", normals)

    @property
    def dim(self):
        return self.facet_normals.shape[1]

    @classmethod
    def orthant(cls, m):
        """The nonnegative orthant ``R^m_+``."""
        eye = np.eye(m)
        return cls(eye, eye)

    @classmethod
    def simplicial(cls, basis):
        """Cone spanned by the columns of an invertible ``m x m`` matrix.

        The facet normals are the rows of the inverse, so
        ``C = {T u : u >= 0} = {y : T^{-1} y >= 0}``.
        """
        basis = np.array(basis, dtype=np.float64)
        if basis.ndim != 2 or basis.shape[0] != basis.shape[1]:
            raise ConeError("simplicial cone needs a square basis")
        if abs(np.linalg.det(basis)) < 1e-12:
            raise ConeError("simplicial cone basis is singular")
        return cls(basis.T, np.linalg.inv(basis))

    @classmethod
    def polygonal(cls, generators):
        """Pointed cone in R^3 over a convex polygon of generator directions.

        ``generators`` must be listed in cyclic order around the polygon;
        the normal of the facet between consecutive generators is their
        cross product, oriented to point into the cone.
        """
        gens = np.array(generators, dtype=np.float64)
        if gens.ndim != 2 or gens.shape[1] != 3 or gens.shape[0] < 3:
            raise ConeError("polygonal cone needs at least three generators in R^3")
        centre = gens.sum(axis=0)
        normals = []
        for k in range(len(gens)):
            nrm = np.cross(gens[k], gens[(k + 1) % len(gens)])
            if nrm @ centre < 0:
                nrm = -nrm
            normals.append(nrm)
        return cls(gens, np.array(normals))

    @cached_property
    def projectors(self):
        """Orthogonal projectors onto spans of independent active normal sets.

        Index 0 is the zero projector (empty active set).
        """
        m = self.dim
        normals = self.facet_normals
        projs = [np.zeros((m, m))]
        for size in range(1, min(len(normals), m) + 1):
            for subset in combinations(range(len(normals)), size):
                rows = normals[list(subset)]
                gram = rows @ rows.T
                if np.min(np.linalg.eigvalsh(gram)) < 1e-10:
                    continue
                projs.append(rows.T @ np.linalg.solve(gram, rows))
        out = np.ascontiguousarray(projs, dtype=np.float64)
        out.flags.writeable = False
        return out


@dataclass(frozen=True)
class DualFunctional:
    """Unit functional nonnegative on the cone, with ``lambda_star = <ystar, cbar>``."""

    ystar: np.ndarray
    lambda_star: float


def _vec(C, y):
    y = np.asarray(y, dtype=np.float64)
    if y.ndim == 0:
        y = y.reshape(1)
    if y.shape != (C.dim,):
        raise DimensionError(f"expected a vector of dimension {C.dim}, got shape {y.shape}")
    return y


def cone_margin(C, y):
    """``min_j <a_j, y>``: nonnegative exactly when ``y`` is in the cone."""
    return float(kernels.margins(C.facet_normals, _vec(C, y))[0])


def cone_margins(C, ys):
    """Vectorized :func:`cone_margin` over the rows of ``ys``."""
    ys = np.asarray(ys, dtype=np.float64)
    if ys.ndim != 2 or ys.shape[1] != C.dim:
        raise DimensionError(f"expected rows of dimension {C.dim}")
    return kernels.margins(C.facet_normals, ys)


def cone_contains(C, y, tol=DEFAULT_TOL):
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return cone_margin(C, y) >= -tol


def cone_interior_contains(C, y, tol=DEFAULT_TOL):
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return cone_margin(C, y) > tol


def is_pointed(C):
    """``C ∩ (-C) = {0}``.

    ``C ∩ (-C)`` is the null space of the facet-normal matrix, so the cone is
    pointed exactly when the normals have full rank.
    """
    return int(np.linalg.matrix_rank(C.facet_normals)) == C.dim


def distance_to_cone(C, y):
    """Euclidean distance from ``y`` to ``C`` (0 inside the cone)."""
    return float(kernels.distances(C.facet_normals, C.projectors, _vec(C, y))[0])


def distances_to_cone(C, ys):
    """Vectorized :func:`distance_to_cone` over the rows of ``ys``."""
    ys = np.asarray(ys, dtype=np.float64)
    if ys.ndim != 2 or ys.shape[1] != C.dim:
        raise DimensionError(f"expected rows of dimension {C.dim}")
    return kernels.distances(C.facet_normals, C.projectors, ys)


def boundary_distance(C, c, tol=0.0):
    """Distance from ``c`` to the complement of the cone.

    For unit normals the complement is the union of the open half-spaces
    ``<a_j, y> < 0``, so the distance is ``min_j <a_j, c>``. Returns 0 when
    ``c`` is not an interior point.
    """
    margin = cone_margin(C, c)
    return margin if margin > tol else 0.0


def select_dual_functional(C, c, tol=DEFAULT_TOL, require_interior=True):
    """Deterministic unit functional ``y*`` with ``<y*, C> >= 0``.

    ``y*`` is the renormalized mean of the facet normals, which lies in the
    dual cone. When ``c`` is interior, ``<y*, c> >= min_j <a_j, c>``.

    Raises
    ------
    ConeError
        If the cone is not pointed, ``c`` is not interior (unless
        ``require_interior`` is false), or ``<y*, c>`` is not positive.
    """
    c = _vec(C, c)
    if not is_pointed(C):
        raise ConeError("cone is not pointed")
    interior = cone_interior_contains(C, c, tol)
    if require_interior and not interior:
        raise ConeError("cbar is not an interior point of the cone")
    mean = C.facet_normals.mean(axis=0)
    ystar = mean / np.sqrt(mean @ mean)
    lam = float(ystar @ c)
    if not lam > 0.0:
        raise ConeError("<y*, cbar> is not positive")
    if interior:
        bd = boundary_distance(C, c)
        if lam < bd - tol:
            raise ConeError(f"lambda* = {lam} below boundary distance {bd}")
    ystar.flags.writeable = False
    return DualFunctional(ystar=ystar, lambda_star=lam)
