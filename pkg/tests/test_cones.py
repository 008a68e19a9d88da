import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import nnls

from vecvp import (
    ConeError,
    DimensionError,
    PolyhedralCone,
    boundary_distance,
    cone_contains,
    cone_interior_contains,
    distance_to_cone,
    is_pointed,
    select_dual_functional,
)

from .conftest import cones_for


def nnls_distance(cone, y):
    """Distance to the conic hull of the generators, by nonnegative least squares."""
    _, resid = nnls(cone.generators.T, np.asarray(y, dtype=float))
    return resid


def test_orthant_membership_and_interior():
    C = PolyhedralCone.orthant(2)
    assert cone_contains(C, [0.0, 1.0])
    assert not cone_contains(C, [-1e-6, 1.0])
    assert cone_contains(C, [-1e-10, 1.0])
    assert not cone_interior_contains(C, [0.0, 1.0])
    assert cone_interior_contains(C, [1.0, 1.0])


def test_distance_to_orthant_closed_form():
    C = PolyhedralCone.orthant(2)
    assert distance_to_cone(C, [-1.0, -1.0]) == pytest.approx(math.sqrt(2), abs=1e-15)
    assert distance_to_cone(C, [-3.0, 2.0]) == pytest.approx(3.0, abs=1e-15)
    assert distance_to_cone(C, [1.0, 2.0]) == 0.0


def test_half_plane_is_not_pointed():
    C = PolyhedralCone([[1.0, 0.0], [0.0, 1.0], [0.0, -1.0]], [[1.0, 0.0]])
    assert not is_pointed(C)
    with pytest.raises(ConeError):
        select_dual_functional(C, [1.0, 0.0])


def test_inconsistent_representations_rejected():
    with pytest.raises(ConeError):
        PolyhedralCone([[1.0, -1.0]], [[1.0, 0.0], [0.0, 1.0]])
    with pytest.raises(DimensionError):
        PolyhedralCone([[1.0, 0.0]], [[1.0, 0.0, 0.0]])


def test_boundary_distance_of_orthant_is_smallest_coordinate():
    C = PolyhedralCone.orthant(3)
    assert boundary_distance(C, [2.0, 0.5, 3.0]) == 0.5
    assert boundary_distance(C, [2.0, 0.0, 3.0]) == 0.0


def test_dual_functional_requires_interior_direction():
    C = PolyhedralCone.orthant(2)
    with pytest.raises(ConeError):
        select_dual_functional(C, [1.0, 0.0])
    d = select_dual_functional(C, [1.0, 0.0], require_interior=False)
    assert d.lambda_star > 0


@pytest.mark.parametrize("m", [1, 2, 3])
def test_dual_functional_is_unit_and_dominates_boundary_distance(m):
    for C, c in cones_for(m):
        d = select_dual_functional(C, c)
        assert np.linalg.norm(d.ystar) == pytest.approx(1.0, abs=1e-12)
        assert np.all(C.generators @ d.ystar >= -1e-12)
        assert d.lambda_star >= boundary_distance(C, c) - 1e-12


vectors = st.lists(st.floats(-5, 5, allow_nan=False), min_size=3, max_size=3)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([1, 2, 3]), vectors)
def test_distance_matches_nnls_oracle(m, raw):
    y = np.array(raw[:m])
    for C, _ in cones_for(m):
        assert distance_to_cone(C, y) == pytest.approx(nnls_distance(C, y), abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([1, 2, 3]), vectors)
def test_distance_properties(m, raw):
    y = np.array(raw[:m])
    for C, _ in cones_for(m):
        d = distance_to_cone(C, y)
        assert 0.0 <= d <= np.linalg.norm(y) + 1e-12
        if cone_contains(C, y, 0.0):
            assert d == 0.0
        elif d == 0.0:
            assert cone_contains(C, y)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([2, 3]), vectors, st.floats(0.01, 1.0))
def test_boundary_distance_is_the_largest_inscribed_ball(m, raw, scale):
    for C, c in cones_for(m):
        bd = boundary_distance(C, c)
        u = np.array(raw[:m])
        if np.linalg.norm(u) == 0:
            continue
        u = u / np.linalg.norm(u)
        assert cone_contains(C, c + scale * bd * u, 1e-12)
