import json

import numpy as np
import pytest
from hypothesis import strategies as st

from vecvp import (
    DeltaSequence,
    EpsSequence,
    FiniteMetricSpace,
    MetricPower,
    PolyhedralCone,
    VPProblem,
)

EK3_DOC = {
    "name": "ek3",
    "space": {"labels": ["0", "1", "2"], "dist": [[0, 1, 2], [1, 0, 1], [2, 1, 0]]},
    "cone": {"dim": 1, "generators": [[1.0]], "facet_normals": [[1.0]]},
    "cbar": [1.0],
    "objective": [[1.0], [0.4], [0.0]],
    "gauge": {"form": "metric_power", "p": 1},
    "principle": {
        "x0": 0,
        "eps": 1.0,
        "eps_seq": {"head": [0.5], "ratio": 0.5},
        "delta_seq": {"head": [0.5]},
        "N": 1,
    },
    "corollary": {"lam": 2.0},
}


def ek3_space():
    return FiniteMetricSpace.from_matrix([[0, 1, 2], [1, 0, 1], [2, 1, 0]], ["0", "1", "2"])


def ek3_problem(**changes):
    kw = dict(
        space=ek3_space(),
        gauge=MetricPower(1),
        cone=PolyhedralCone.orthant(1),
        cbar=[1.0],
        f=[1.0, 0.4, 0.0],
        x0=0,
        eps=1.0,
        eps_seq=EpsSequence((0.5,), 0.5),
        delta_seq=DeltaSequence.finite([0.5]),
        name="ek3",
    )
    kw.update(changes)
    return VPProblem(**kw)


@pytest.fixture
def ek3():
    return ek3_problem()


@pytest.fixture
def write_doc(tmp_path):
    def write(doc, name="instance.json"):
        path = tmp_path / name
        path.write_text(json.dumps(doc), encoding="utf-8")
        return str(path)

    return write


def cones_for(m):
    """A few fixed pointed cones in R^m with an interior direction each."""
    out = [(PolyhedralCone.orthant(m), np.ones(m))]
    if m == 2:
        basis = np.array([[1.0, -0.3], [0.2, 1.0]])
        out.append((PolyhedralCone.simplicial(basis), basis.sum(axis=1)))
    if m == 3:
        gens = [[0.6, 0.0, 1.0], [0.0, 0.6, 1.0], [-0.6, 0.0, 1.0], [0.0, -0.6, 1.0]]
        out.append((PolyhedralCone.polygonal(gens), np.array([0.0, 0.0, 1.0])))
    return out


# quarter-integers keep cone tests away from rounding noise near the boundary
quarters = st.integers(-8, 8).map(lambda k: k / 4)


@st.composite
def objective_tables(draw, max_n=6):
    m = draw(st.integers(1, 3))
    n = draw(st.integers(1, max_n))
    rows = draw(st.lists(st.lists(quarters, min_size=m, max_size=m), min_size=n, max_size=n))
    cone, cbar = draw(st.sampled_from(cones_for(m)))
    return np.array(rows), cone, cbar
