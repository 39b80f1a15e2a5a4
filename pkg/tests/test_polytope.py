"""Vertex enumeration and hull membership against constraint-subset
enumeration and separating-direction search."""

import numpy as np
import pytest

from credalkit.errors import (
    EmptySetError,
    SizeLimitError,
    UnboundedPolytopeError,
)
from credalkit.numerics.polytope import (
    deduplicate,
    enumerate_vertices,
    extreme_points,
    membership_residual,
    polytope_contains,
)

from oracles import oracle_point_in_hull, oracle_vertices, same_point_set


def test_full_simplex_vertices_are_the_unit_basis():
    verts = enumerate_vertices(
        a_eq=[[1.0, 1.0, 1.0]], b_eq=[1.0], a_ub=None, b_ub=None, dim=3
    )
    assert same_point_set(verts, np.eye(3))


def test_pinned_outcome_marginal_has_four_extreme_joints():
    # joints on a 2x2 grid with second-column mass fixed to 2/3
    verts = enumerate_vertices(
        a_eq=[[1.0, 1.0, 1.0, 1.0], [0.0, 1.0, 0.0, 1.0]],
        b_eq=[1.0, 2.0 / 3.0],
        a_ub=None,
        b_ub=None,
        dim=4,
    )
    expected = np.array(
        [
            [1 / 3, 2 / 3, 0, 0],
            [1 / 3, 0, 0, 2 / 3],
            [0, 2 / 3, 1 / 3, 0],
            [0, 0, 1 / 3, 2 / 3],
        ]
    )
    assert same_point_set(verts, expected)


def test_inequality_cut_matches_subset_enumeration():
    verts = enumerate_vertices(
        a_eq=[[1.0, 1.0, 1.0]],
        b_eq=[1.0],
        a_ub=[[1.0, 0.0, 0.0]],
        b_ub=[0.5],
        dim=3,
    )
    reference = oracle_vertices(
        [[1.0, 1.0, 1.0]], [1.0], [[1.0, 0.0, 0.0]], [0.5], 3
    )
    assert same_point_set(verts, reference)


@pytest.mark.parametrize("seed", range(12))
def test_random_low_dimensional_polytopes_match_enumeration(seed):
    rng = np.random.default_rng(3000 + seed)
    dim = int(rng.integers(2, 5))
    n_ub = int(rng.integers(1, 4))
    a_eq = np.ones((1, dim))
    b_eq = np.array([1.0])
    centre = rng.dirichlet(np.ones(dim))
    a_ub = rng.uniform(-1, 1, (n_ub, dim))
    b_ub = a_ub @ centre + rng.uniform(0.05, 0.5, n_ub)
    verts = enumerate_vertices(a_eq, b_eq, a_ub, b_ub, dim)
    reference = oracle_vertices(a_eq, b_eq, a_ub, b_ub, dim)
    assert reference.shape[0] > 0
    # the cutting enumerator must produce the same point set, up to order
    assert same_point_set(verts, reference, tol=1e-7)


def test_empty_intersection_raises():
    with pytest.raises(EmptySetError):
        enumerate_vertices(
            a_eq=[[1.0, 1.0], [1.0, 1.0]],
            b_eq=[1.0, 0.25],
            a_ub=None,
            b_ub=None,
            dim=2,
        )


def test_unbounded_region_is_rejected():
    # no simplex row: the nonnegative orthant cut by one inequality is a cone
    with pytest.raises(UnboundedPolytopeError):
        enumerate_vertices(
            a_eq=None, b_eq=None, a_ub=[[-1.0, 0.0]], b_ub=[0.0], dim=2
        )


def test_dimension_limit_is_enforced():
    with pytest.raises(SizeLimitError):
        enumerate_vertices(
            a_eq=[[1.0] * 17], b_eq=[1.0], a_ub=None, b_ub=None, dim=17
        )


def test_membership_residual_zero_inside_positive_outside():
    square = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    assert membership_residual(square, [0.5, 0.5]) <= 1e-10
    assert membership_residual(square, [0.25, 0.75]) <= 1e-10
    assert membership_residual(square, [1.2, 0.5]) >= 0.19
    assert polytope_contains(square, [1.0, 1.0])
    assert not polytope_contains(square, [1.0, 1.0 + 1e-6])


@pytest.mark.parametrize("seed", range(5))
def test_membership_agrees_with_separating_direction_search(seed):
    rng = np.random.default_rng(4000 + seed)
    dim = int(rng.integers(2, 4))
    verts = rng.uniform(0, 1, (int(rng.integers(3, 6)), dim))
    agree = 0
    for _ in range(40):
        point = rng.uniform(-0.2, 1.2, dim)
        lp_says = membership_residual(verts, point) <= 1e-8
        search_says = oracle_point_in_hull(verts, point, tol=1e-6)
        # the two procedures may disagree only within a thin boundary band
        residual = membership_residual(verts, point)
        if abs(residual) > 1e-5 or lp_says == search_says:
            agree += 1
        assert lp_says == search_says or residual <= 1e-5
    assert agree == 40


def test_deduplicate_collapses_near_copies():
    pts = np.array([[0.0, 1.0], [0.0, 1.0 + 1e-12], [1.0, 0.0]])
    assert deduplicate(pts).shape[0] == 2


def test_extreme_points_drops_interior_and_keeps_corners():
    pts = np.array(
        [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.25, 0.25], [0.5, 0.5]]
    )
    kept = extreme_points(pts)
    assert same_point_set(kept, [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])


def test_extreme_points_of_a_segment_are_its_ends():
    pts = np.array([[0.0, 0.0], [0.5, 0.5], [1.0, 1.0], [0.75, 0.75]])
    kept = extreme_points(pts)
    assert same_point_set(kept, [[0.0, 0.0], [1.0, 1.0]])


def test_enumeration_is_deterministic():
    kwargs = dict(
        a_eq=[[1.0, 1.0, 1.0, 1.0], [0.0, 1.0, 0.0, 1.0]],
        b_eq=[1.0, 2.0 / 3.0],
        a_ub=None,
        b_ub=None,
        dim=4,
    )
    first = enumerate_vertices(**kwargs)
    second = enumerate_vertices(**kwargs)
    assert first.tobytes() == second.tobytes()
