"""Problem instances for the vector variational principle.

An instance bundles the finite space, gauge, ordering cone, direction
``cbar``, objective table, starting point and the two parameter sequences:

* ``eps_seq``: ``eps_i`` for ``i >= 1``, strictly decreasing to 0;
* ``delta_seq``: ``delta_i`` for ``i >= 0``, positive for ``i < N`` and zero
  afterwards, with ``N`` finite or infinite.
"""
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .cones import (
    DEFAULT_TOL,
    PolyhedralCone,
    cone_interior_contains,
    cone_margin,
    is_pointed,
)
from .exceptions import DimensionError, HypothesisError
from .minimality import as_objective, minimality_witness
from .spaces import (
    FiniteMetricSpace,
    MatrixGauge,
    NormPower,
    check_gauge_type,
    check_metric_axioms,
    gauge_matrix,
)


@dataclass(frozen=True)
class EpsSequence:
    """``eps_1, ..., eps_L`` given explicitly, then ``eps_{L+k} = eps_L * ratio**k``."""

    head: tuple
    ratio: float

    def __post_init__(self):
        object.__setattr__(self, "head", tuple(float(v) for v in self.head))
        object.__setattr__(self, "ratio", float(self.ratio))

    @classmethod
    def geometric(cls, first, ratio):
        return cls((first,), ratio)

    def __call__(self, i):
        if i < 1:
            raise IndexError("eps_i is defined for i >= 1")
        if i <= len(self.head):
            return self.head[i - 1]
        return self.head[-1] * self.ratio ** (i - len(self.head))

    def problems(self):
        """Violated invariants, as messages."""
        out = []
        if not self.head:
            out.append("eps_seq needs at least one explicit value")
            return out
        if any(not (v > 0 and math.isfinite(v)) for v in self.head):
            out.append("eps_i>0 for all i")
        if any(b >= a for a, b in zip(self.head, self.head[1:])):
            out.append("eps_seq not strictly decreasing")
        if not 0 < self.ratio < 1:
            out.append("eps_seq tail ratio must lie in (0, 1) so that eps_i decreases to 0")
        return out


@dataclass(frozen=True)
class DeltaSequence:
    """``delta_0, ..., delta_{L-1}`` explicit; then either zeros (``N = L``)
    or a geometric tail ``delta_{L-1+k} = delta_{L-1} * ratio**k`` (``N`` infinite)."""

    head: tuple
    ratio: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "head", tuple(float(v) for v in self.head))
        if self.ratio is not None:
            object.__setattr__(self, "ratio", float(self.ratio))

    @classmethod
    def finite(cls, values):
        return cls(tuple(values), None)

    @classmethod
    def geometric(cls, first, ratio):
        return cls((first,), ratio)

    @property
    def N(self):
        """Number of positive terms, ``None`` when infinite."""
        return None if self.ratio is not None else len(self.head)

    @property
    def finite_N(self):
        return self.ratio is None

    def __call__(self, i):
        if i < 0:
            raise IndexError("delta_i is defined for i >= 0")
        if i < len(self.head):
            return self.head[i]
        if self.ratio is None:
            return 0.0
        return self.head[-1] * self.ratio ** (i - len(self.head) + 1)

    def tail_sum(self, k):
        """``sum_{i >= k} delta_i``; ``math.inf`` when the series diverges."""
        k = max(k, 0)
        L = len(self.head)
        if self.ratio is None:
            return math.fsum(self.head[k:])
        if self.ratio >= 1.0:
            return math.inf
        if k >= L:
            return self(k) / (1.0 - self.ratio)
        return math.fsum(self.head[k:]) + self.head[-1] * self.ratio / (1.0 - self.ratio)

    def problems(self):
        out = []
        if not self.head:
            out.append("delta_seq needs at least one explicit value (N >= 1)")
            return out
        if any(not (v > 0 and math.isfinite(v)) for v in self.head):
            out.append("δ_i>0 for all i<N")
        if self.ratio is not None and not (self.ratio > 0 and math.isfinite(self.ratio)):
            out.append("δ_i>0 for all i<N (tail ratio must be positive)")
        return out


@dataclass(frozen=True, eq=False)
class VPProblem:
    """One instance of the principle."""

    space: FiniteMetricSpace
    gauge: object
    cone: PolyhedralCone
    cbar: np.ndarray
    f: np.ndarray
    x0: int
    eps: float
    eps_seq: EpsSequence
    delta_seq: DeltaSequence
    name: str = "instance"

    def __post_init__(self):
        cbar = np.array(self.cbar, dtype=np.float64).reshape(-1)
        if cbar.shape != (self.cone.dim,):
            raise DimensionError(f"cbar must have dimension {self.cone.dim}")
        cbar.flags.writeable = False
        object.__setattr__(self, "cbar", cbar)
        f = as_objective(self.f, self.cone.dim)
        if f.shape[0] != self.space.n:
            raise DimensionError(f"objective has {f.shape[0]} rows for {self.space.n} points")
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "x0", int(self.x0))
        object.__setattr__(self, "eps", float(self.eps))

    @property
    def n(self):
        return self.space.n

    @property
    def m(self):
        return self.cone.dim

    @property
    def N(self):
        return self.delta_seq.N

    @cached_property
    def rho(self):
        """Read-only gauge table ``rho[x, y]``."""
        table = gauge_matrix(self.gauge, self.space)
        table.flags.writeable = False
        return table


def validate_problem(p, assume_hypotheses=False, tol=DEFAULT_TOL):
    """Check instance invariants and the hypotheses of the principle.

    Raises
    ------
    HypothesisError
        Naming the first violated invariant. With ``assume_hypotheses`` the
        ``eps``-minimality of ``x0`` is not checked and ``cbar`` may lie on
        the boundary of the cone (it must still be a nonzero cone element).
    """
    axioms = check_metric_axioms(p.space, tol)
    if not axioms.ok:
        for item in ("finite", "symmetry", "identity", "positivity", "triangle", "embedding"):
            if item in axioms.witnesses:
                where = axioms.witnesses[item]
                raise HypothesisError(
                    f"metric {item} axiom violated at points {where}", f"metric-{item}"
                )
    if isinstance(p.gauge, MatrixGauge) and p.gauge.matrix.shape != (p.n, p.n):
        raise HypothesisError("gauge matrix size does not match the space", "gauge-shape")
    if isinstance(p.gauge, NormPower) and p.space.embedding is None:
        raise HypothesisError("NormPower gauge needs an embedded space", "gauge-embedding")
    if not check_gauge_type(p.gauge, p.space):
        raise HypothesisError(
            "gauge is not gauge-type: need rho(x,x)=0 and rho(y,z)>0 for y!=z", "gauge-type"
        )
    probs = p.eps_seq.problems()
    if probs:
        raise HypothesisError(probs[0], "eps-seq")
    probs = p.delta_seq.problems()
    if probs:
        raise HypothesisError(probs[0], "delta-seq")
    if not p.eps > 0:
        raise HypothesisError("eps must be positive", "eps")
    if not 0 <= p.x0 < p.n:
        raise HypothesisError(f"x0={p.x0} is not a point index", "x0")
    if not is_pointed(p.cone):
        raise HypothesisError("ordering cone is not pointed", "cone-pointed")
    if not cone_interior_contains(p.cone, p.cbar, tol):
        if not assume_hypotheses:
            raise HypothesisError("cbar is not an interior point of the cone", "cbar-interior")
        if cone_margin(p.cone, p.cbar) < -tol or not np.any(p.cbar != 0.0):
            raise HypothesisError("cbar must be a nonzero element of the cone", "cbar-cone")
    if not assume_hypotheses:
        bad = minimality_witness(
            p.f, p.x0, p.eps, p.rho, p.cbar, p.cone, scale=p.delta_seq(0), tol=tol
        )
        if bad is not None:
            k, excess = bad
            raise HypothesisError(
                f"x0 not ε-minimal w.r.t. δ₀ρ: witness point {k}, residual {excess:.6g}",
                "x0-eps-minimal",
            )
