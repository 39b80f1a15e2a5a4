"""Credal sets: construction from constraints, conditioning, marginal sets,
recombination hulls, subset/equality, and dilation detection."""

import numpy as np
import pytest

from credalkit import (
    CredalSet,
    Event,
    JointDist,
    LinearConstraint,
    SpaceSpec,
    build_hull,
    condition_on_x,
    conditional_y_sets,
    credal_condition,
    credal_equal,
    credal_marginal_x,
    credal_marginal_y,
    credal_subset,
    detect_dilation,
    from_constraints,
    load_builtin,
)
from credalkit.errors import (
    EmptyConditionalError,
    EmptySetError,
    ValidationError,
)

from oracles import random_credal, random_space, same_point_set


@pytest.fixture
def pinned_outcome():
    """2x2 joints with Pr(second outcome) fixed to 2/3, dependence free."""
    return load_builtin("example_2_1").credal_set


@pytest.fixture
def coin_pair():
    """2x2 joints with both uniform marginals fixed, coupling free."""
    return load_builtin("walley_coin").credal_set


def test_from_constraints_recovers_the_four_extreme_joints(pinned_outcome):
    assert pinned_outcome.n_vertices == 4
    expected = np.array(
        [
            [1 / 3, 2 / 3, 0, 0],
            [1 / 3, 0, 0, 2 / 3],
            [0, 2 / 3, 1 / 3, 0],
            [0, 0, 1 / 3, 2 / 3],
        ]
    )
    assert same_point_set(pinned_outcome.flat, expected)


def test_from_constraints_rejects_empty_sets():
    space = SpaceSpec(("x0", "x1"), ("y0", "y1"), ("a0", "a1"))
    with pytest.raises(EmptySetError):
        from_constraints(
            space,
            [
                LinearConstraint((1.0, 1.0, 0.0, 0.0), "eq", 0.9),
                LinearConstraint((1.0, 1.0, 0.0, 0.0), "le", 0.1),
            ],
        )


def test_constructor_reduces_to_extreme_points():
    space = SpaceSpec(("x0", "x1"), ("y0", "y1"), ("a0", "a1"))
    a = JointDist(space, [[0.5, 0.5], [0.0, 0.0]])
    b = JointDist(space, [[0.0, 0.0], [0.5, 0.5]])
    mid = JointDist(space, [[0.25, 0.25], [0.25, 0.25]])
    p = CredalSet(space, [a, b, mid])
    assert p.n_vertices == 2


def test_outcome_marginal_of_pinned_set_is_a_point(pinned_outcome):
    my = credal_marginal_y(pinned_outcome)
    assert my.is_point()
    assert np.allclose(my.vertices[0], [1 / 3, 2 / 3])


def test_observation_marginal_spans_the_simplex(pinned_outcome):
    mx = credal_marginal_x(pinned_outcome)
    assert same_point_set(mx.vertices, np.eye(2))


def test_conditioning_on_an_observation(pinned_outcome):
    space = pinned_outcome.space
    cond = credal_condition(pinned_outcome, Event.x_equals(space, "0"))
    my = credal_marginal_y(cond)
    # conditioning tells us nothing here: the conditional outcome set is
    # the whole simplex even though the prior outcome set was a point
    assert same_point_set(my.vertices, np.eye(2))
    # some vertices gave the event zero mass, which the notes record
    assert any("dropped" in note for note in cond.notes)


def test_conditioning_with_no_survivors_fails():
    space = SpaceSpec(("x0", "x1"), ("y0", "y1"), ("a0", "a1"))
    p = CredalSet(space, [JointDist(space, [[0.5, 0.5], [0.0, 0.0]])])
    with pytest.raises(EmptyConditionalError):
        credal_condition(p, Event.x_equals(space, "x1"))


def test_condition_on_x_returns_none_when_undefined():
    space = SpaceSpec(("x0", "x1"), ("y0", "y1"), ("a0", "a1"))
    p = CredalSet(space, [JointDist(space, [[0.5, 0.5], [0.0, 0.0]])])
    assert condition_on_x(p, "x1") is None
    assert condition_on_x(p, "x0") is not None


def test_conditional_y_sets_per_observation(pinned_outcome):
    sets = conditional_y_sets(pinned_outcome)
    for x in ("0", "1"):
        assert same_point_set(sets[x].vertices, np.eye(2))


def test_hull_contains_the_set_and_can_be_strictly_larger(pinned_outcome):
    hull = build_hull(pinned_outcome)
    assert credal_subset(pinned_outcome, hull)
    assert not credal_equal(pinned_outcome, hull)
    # recombination loses the pinned outcome frequency entirely: the hull is
    # the full joint simplex, whose extreme points are the four unit masses
    assert same_point_set(hull.flat, np.eye(4))


def test_hull_is_idempotent(pinned_outcome):
    hull = build_hull(pinned_outcome)
    again = build_hull(hull)
    assert credal_equal(hull, again)


def test_hull_equals_set_for_a_single_joint():
    space = SpaceSpec(("x0", "x1"), ("y0", "y1"), ("a0", "a1"))
    p = CredalSet(space, [JointDist(space, [[0.1, 0.2], [0.3, 0.4]])])
    assert credal_equal(p, build_hull(p))


@pytest.mark.parametrize("seed", range(6))
def test_hull_always_contains_the_set(seed):
    rng = np.random.default_rng(6000 + seed)
    space = random_space(rng, nx=2, ny=2)
    p = random_credal(rng, space, k=3)
    assert credal_subset(p, build_hull(p))


def test_subset_and_equality_are_order_sensitive(pinned_outcome):
    hull = build_hull(pinned_outcome)
    assert credal_subset(pinned_outcome, hull)
    assert not credal_subset(hull, pinned_outcome)
    assert credal_equal(pinned_outcome, pinned_outcome)


def test_dilation_in_the_pinned_outcome_set(pinned_outcome):
    report = detect_dilation(pinned_outcome)
    assert report.any_dilation
    for cell in report.cells:
        assert cell.defined and cell.dilates and cell.is_superset
        assert cell.escape_residual > 1e-3


def test_dilation_in_the_coin_pair(coin_pair):
    report = detect_dilation(coin_pair)
    assert report.any_dilation
    assert all(cell.dilates for cell in report.cells)
    d = report.as_dict()
    assert d["any_dilation"] is True
    assert set(c["x"] for c in d["cells"]) == {"h", "t"}


def test_no_dilation_for_a_product_point_mass():
    space = SpaceSpec(("x0", "x1"), ("y0", "y1"), ("a0", "a1"))
    p = CredalSet(space, [JointDist.from_product(space, [0.5, 0.5], [0.3, 0.7])])
    report = detect_dilation(p)
    assert not report.any_dilation
    for cell in report.cells:
        assert not cell.dilates


def test_constraint_validation():
    with pytest.raises(ValidationError):
        LinearConstraint((1.0, 0.0), "ge", 0.5)
    with pytest.raises(ValidationError):
        LinearConstraint((np.nan, 0.0), "eq", 0.5)


@pytest.mark.parametrize("seed", range(4))
def test_conditioning_commutes_with_vertex_arithmetic(seed):
    """Conditioning the set = conditioning each charging vertex."""
    rng = np.random.default_rng(6600 + seed)
    space = random_space(rng, nx=2, ny=3)
    p = random_credal(rng, space, k=3, concentration=2.0)
    event = Event.x_equals(space, "x0")
    cond = credal_condition(p, event)
    from credalkit import condition

    from credalkit.numerics import membership_residual

    for v in p.vertices:
        if v.prob(event) > 1e-12:
            row = condition(v, event).weights.ravel()
            # every conditioned vertex lies in the conditioned set
            assert membership_residual(cond.flat, row) <= 1e-8
