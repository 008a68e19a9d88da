"""Finite metric spaces and gauge-type functions on them.

Finite spaces are complete, and every function on them is continuous, so
the only content of the gauge-type definition that survives is
``rho(x, x) = 0`` and ``rho(y, z) > 0`` for ``y != z``: with finitely many
pairs, taking ``delta`` below the smallest off-diagonal value of ``rho``
shows this is equivalent to the epsilon-delta condition.
"""
import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .exceptions import DimensionError, VPError

DEFAULT_TOL = 1e-9


def euclid(a, b):
    """Euclidean distance with a fixed summation order."""
    s = 0.0
    for ak, bk in zip(a, b):
        s += (ak - bk) * (ak - bk)
    return math.sqrt(s)


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """Points ``0..n-1`` with labels, a distance matrix and an optional embedding.

    The constructor only checks shapes; use :func:`check_metric_axioms` to
    validate the metric.
    """

    labels: tuple
    dist: np.ndarray
    embedding: np.ndarray | None = None

    def __post_init__(self):
        dist = np.array(self.dist, dtype=np.float64)
        n = len(self.labels)
        if dist.shape != (n, n):
            raise DimensionError(f"distance matrix must be {n}x{n}, got {dist.shape}")
        if len(set(self.labels)) != n:
            raise VPError("point labels must be unique")
        dist.flags.writeable = False
        object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))
        object.__setattr__(self, "dist", dist)
        if self.embedding is not None:
            emb = np.array(self.embedding, dtype=np.float64)
            if emb.ndim == 1:
                emb = emb.reshape(-1, 1)
            if emb.ndim != 2 or emb.shape[0] != n:
                raise DimensionError("embedding needs one point per label")
            emb.flags.writeable = False
            object.__setattr__(self, "embedding", emb)

    @property
    def n(self):
        return len(self.labels)

    @classmethod
    def from_embedding(cls, points, labels=None):
        """Space of points in R^k with the Euclidean metric."""
        pts = np.array(points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        n = len(pts)
        if labels is None:
            labels = [f"p{i}" for i in range(n)]
        rows = pts.tolist()
        dist = [[euclid(rows[i], rows[j]) for j in range(n)] for i in range(n)]
        return cls(tuple(labels), np.array(dist), pts)

    @classmethod
    def from_matrix(cls, dist, labels=None):
        dist = np.array(dist, dtype=np.float64)
        if labels is None:
            labels = [f"p{i}" for i in range(len(dist))]
        return cls(tuple(labels), dist)


@dataclass(frozen=True)
class MetricPower:
    """``rho(x, y) = d(x, y)**p``."""

    p: float

    def __post_init__(self):
        if not self.p > 0:
            raise VPError("MetricPower exponent must be positive")


@dataclass(frozen=True, eq=False)
class MatrixGauge:
    """Explicit table ``rho(i, j) = matrix[i][j]``; may be asymmetric."""

    matrix: np.ndarray

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=np.float64)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionError("gauge matrix must be square")
        if not np.all(np.isfinite(mat)) or np.any(mat < 0):
            raise VPError("gauge matrix entries must be finite and nonnegative")
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)


@dataclass(frozen=True)
class NormPower:
    """``rho(x, y) = |e(x) - e(y)|**p`` for the space's embedding ``e``."""

    p: float

    def __post_init__(self):
        if not self.p > 0:
            raise VPError("NormPower exponent must be positive")


def gauge_matrix(rho, S):
    """The full ``n x n`` table of ``rho`` on ``S``."""
    n = S.n
    if isinstance(rho, MetricPower):
        d = S.dist.tolist()
        return np.array([[d[i][j] ** rho.p for j in range(n)] for i in range(n)])
    if isinstance(rho, MatrixGauge):
        if rho.matrix.shape != (n, n):
            raise DimensionError(f"gauge matrix must be {n}x{n}")
        return rho.matrix.copy()
    if isinstance(rho, NormPower):
        if S.embedding is None:
            raise VPError("NormPower gauge needs an embedded space")
        e = S.embedding.tolist()
        return np.array([[euclid(e[i], e[j]) ** rho.p for j in range(n)] for i in range(n)])
    raise TypeError(f"unknown gauge form {type(rho).__name__}")


def gauge_eval(rho, S, i, j):
    if not (0 <= i < S.n and 0 <= j < S.n):
        raise IndexError(f"point index out of range for a {S.n}-point space")
    if isinstance(rho, MetricPower):
        return float(S.dist[i, j]) ** rho.p
    if isinstance(rho, MatrixGauge):
        return float(rho.matrix[i, j])
    if isinstance(rho, NormPower):
        if S.embedding is None:
            raise VPError("NormPower gauge needs an embedded space")
        return euclid(S.embedding[i].tolist(), S.embedding[j].tolist()) ** rho.p
    raise TypeError(f"unknown gauge form {type(rho).__name__}")


def check_gauge_type(rho, S):
    """Gauge-type test on a finite space: zero diagonal, positive off-diagonal."""
    try:
        table = gauge_matrix(rho, S)
    except VPError:
        return False
    off = ~np.eye(S.n, dtype=bool)
    return bool(np.all(np.diag(table) == 0.0) and np.all(table[off] > 0.0))


def triangle_violation(table, tol=DEFAULT_TOL):
    """First triple ``(i, j, k)`` with ``t[i,k] > t[i,j] + t[j,k] + tol``, else ``None``."""
    t = np.asarray(table)
    # excess[i, j, k] = t[i, k] - t[i, j] - t[j, k]
    excess = t[:, None, :] - (t[:, :, None] + t[None, :, :]) - tol
    hits = np.argwhere(excess > 0)
    if hits.size == 0:
        return None
    i, j, k = (int(v) for v in hits[0])
    return i, j, k


def check_triangle(rho, S, tol=DEFAULT_TOL):
    return triangle_violation(gauge_matrix(rho, S), tol) is None


@dataclass
class MetricAxiomReport:
    """Itemized metric-axiom check; ``witnesses`` names a violating index tuple per failed item."""

    symmetry: bool
    identity: bool
    positivity: bool
    triangle: bool
    embedding: bool | None = None
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(
            v for v in (self.symmetry, self.identity, self.positivity, self.triangle)
        ) and self.embedding is not False


def check_metric_axioms(S, tol=DEFAULT_TOL):
    d = S.dist
    n = S.n
    witnesses = {}

    finite = bool(np.all(np.isfinite(d)))
    if not finite:
        witnesses["finite"] = tuple(int(v) for v in np.argwhere(~np.isfinite(d))[0])

    asym = np.argwhere(np.abs(d - d.T) > tol)
    if asym.size:
        witnesses["symmetry"] = tuple(int(v) for v in asym[0])

    diag = np.argwhere(np.diag(d) != 0.0)
    if diag.size:
        i = int(diag[0][0])
        witnesses["identity"] = (i, i)

    off = ~np.eye(n, dtype=bool)
    nonpos = np.argwhere(off & ~(d > 0.0))
    if nonpos.size:
        witnesses["positivity"] = tuple(int(v) for v in nonpos[0])

    tri = triangle_violation(d, tol) if finite else None
    if tri is not None:
        witnesses["triangle"] = tri

    emb_ok = None
    if S.embedding is not None:
        e = S.embedding.tolist()
        emb_ok = True
        for i, j in product(range(n), repeat=2):
            if abs(euclid(e[i], e[j]) - d[i, j]) > tol:
                emb_ok = False
                witnesses["embedding"] = (i, j)
                break

    return MetricAxiomReport(
        symmetry="symmetry" not in witnesses,
        identity="identity" not in witnesses,
        positivity="positivity" not in witnesses and finite,
        triangle="triangle" not in witnesses and finite,
        embedding=emb_ok,
        witnesses=witnesses,
    )
