"""Polytope utilities on top of the LP layer.

Polytopes live in the nonnegative orthant within the box ``{x >= 0,
sum(x) <= 1}`` (probability vectors and their sub-simplices), are described
either by constraints (equality/inequality rows) or by vertices, and are
always kept in irredundant vertex form.

``enumerate_vertices`` inserts the constraint halfspaces one at a time into
that starting box and cuts the current vertex set against each: vertices on
the feasible side stay, and each (inside, outside) vertex pair contributes
its intersection point with the cutting hyperplane.  The candidate set is
deduplicated and pruned to extreme points after every cut, so intermediate
sets stay small.  This is deliberately a different algorithm from the
brute-force active-set enumeration used as a test oracle.
"""

import numpy as np

from ..errors import (
    DimensionError,
    EmptySetError,
    NumericalError,
    SizeLimitError,
    UnboundedPolytopeError,
)
from .lp import LinearProgram, solve_lp

MAX_DIM = 16
DEDUPE_TOL = 1e-9
MEMBER_TOL = 1e-8
_ONPLANE_TOL = 1e-11


def membership_residual(vertices, point):
    """L1 distance from ``point`` to the convex hull of ``vertices``.

    Computed as  min sum(s+ + s-)  s.t.  V^T lam + s+ - s- = point,
    sum(lam) = 1, lam, s >= 0;  zero (up to LP tolerance) means membership.
    """
    vertices = np.atleast_2d(np.asarray(vertices, dtype=np.float64))
    point = np.asarray(point, dtype=np.float64).ravel()
    k, d = vertices.shape
    if point.shape != (d,):
        raise DimensionError(
            f"point has dimension {point.shape[0]}, vertices have {d}"
        )
    a_eq = np.zeros((d + 1, k + 2 * d))
    a_eq[:d, :k] = vertices.T
    a_eq[:d, k:k + d] = np.eye(d)
    a_eq[:d, k + d:] = -np.eye(d)
    a_eq[d, :k] = 1.0
    b_eq = np.concatenate([point, [1.0]])
    c = np.concatenate([np.zeros(k), np.ones(2 * d)])
    sol = solve_lp(LinearProgram(c=c, a_eq=a_eq, b_eq=b_eq))
    return float(sol.objective)


def polytope_contains(vertices, point, tol=MEMBER_TOL):
    return membership_residual(vertices, point) <= tol


def deduplicate(points, tol=DEDUPE_TOL):
    """Drop points within ``tol`` (max-norm) of an earlier point."""
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    kept = []
    for p in points:
        if not any(np.abs(p - q).max() <= tol for q in kept):
            kept.append(p)
    return np.array(kept)


def extreme_points(points, tol=MEMBER_TOL):
    """Irredundant subset: drop points inside the hull of the others."""
    points = deduplicate(points)
    if len(points) <= 1:
        return points
    alive = list(range(len(points)))
    for i in range(len(points)):
        others = [j for j in alive if j != i]
        if not others:
            break
        if membership_residual(points[others], points[i]) <= tol:
            alive.remove(i)
    return points[alive]


def _check_bounded(a_eq, b_eq, a_ub, b_ub, dim):
    # recession directions: a_eq v = 0, a_ub v <= 0, v >= 0; the box v <= 1
    # makes the check a bounded LP, and any positive mass means unbounded
    c = -np.ones(dim)
    a_rows = [np.eye(dim)]
    b_rows = [np.ones(dim)]
    if a_ub.shape[0]:
        a_rows.append(a_ub)
        b_rows.append(np.zeros(a_ub.shape[0]))
    sol = solve_lp(
        LinearProgram(
            c=c,
            a_eq=a_eq if a_eq.shape[0] else None,
            b_eq=np.zeros(a_eq.shape[0]) if a_eq.shape[0] else None,
            a_ub=np.vstack(a_rows),
            b_ub=np.concatenate(b_rows),
        )
    )
    if sol.status == "optimal" and -sol.objective > 1e-9:
        raise UnboundedPolytopeError(
            "constraint set has a nonzero recession direction"
        )


def _cut(points, normal, rhs):
    """Intersect the hull of ``points`` with ``normal . x <= rhs``."""
    vals = points @ normal
    inside = vals <= rhs + _ONPLANE_TOL
    if inside.all():
        return points
    if not inside.any():
        raise EmptySetError("constraints are infeasible (empty polytope)")
    strict = vals < rhs - _ONPLANE_TOL
    new_points = [points[inside]]
    for i in np.nonzero(strict)[0]:
        for j in np.nonzero(~inside)[0]:
            t = (rhs - vals[i]) / (vals[j] - vals[i])
            new_points.append((points[i] + t * (points[j] - points[i]))[None, :])
    return np.vstack(new_points)


def enumerate_vertices(a_eq=None, b_eq=None, a_ub=None, b_ub=None, dim=None):
    """Vertices of ``{x >= 0 : a_eq x = b_eq, a_ub x <= b_ub}``.

    The feasible set must lie inside the box ``{x >= 0, sum(x) <= 1}``
    (distributions and sub-distributions do).  Raises ``EmptySetError`` for
    infeasible constraints, ``UnboundedPolytopeError`` when the constraint
    set has a recession direction, and ``SizeLimitError`` above 16
    dimensions.
    """
    if dim is None:
        raise DimensionError("dim is required")
    if dim > MAX_DIM:
        raise SizeLimitError(f"dimension {dim} exceeds the limit of {MAX_DIM}")
    n_eq = 0 if a_eq is None else len(a_eq)
    n_ub = 0 if a_ub is None else len(a_ub)
    a_eq = np.zeros((0, dim)) if a_eq is None else np.atleast_2d(np.asarray(a_eq, dtype=np.float64))
    b_eq = np.zeros(0) if n_eq == 0 else np.atleast_1d(np.asarray(b_eq, dtype=np.float64))
    a_ub = np.zeros((0, dim)) if a_ub is None else np.atleast_2d(np.asarray(a_ub, dtype=np.float64))
    b_ub = np.zeros(0) if n_ub == 0 else np.atleast_1d(np.asarray(b_ub, dtype=np.float64))
    if a_eq.shape[1] != dim or a_ub.shape[1] != dim:
        raise DimensionError("constraint rows do not match the dimension")
    if b_eq.shape[0] != a_eq.shape[0] or b_ub.shape[0] != a_ub.shape[0]:
        raise DimensionError("rhs length does not match the constraint rows")

    _check_bounded(a_eq, b_eq, a_ub, b_ub, dim)

    # start from the box {x >= 0, sum(x) <= 1}: origin plus unit vectors
    points = np.vstack([np.zeros((1, dim)), np.eye(dim)])
    halfspaces = []
    for g, h in zip(a_eq, b_eq):
        halfspaces.append((g, h))
        halfspaces.append((-g, -h))
    halfspaces.extend(zip(a_ub, b_ub))
    for normal, rhs in halfspaces:
        points = _cut(points, normal, rhs)
        points = extreme_points(points, tol=DEDUPE_TOL)
        if len(points) == 0:
            raise EmptySetError("constraints are infeasible (empty polytope)")

    # final feasibility audit of every reported vertex
    worst = 0.0
    if a_eq.shape[0]:
        worst = max(worst, float(np.abs(points @ a_eq.T - b_eq).max()))
    if a_ub.shape[0]:
        worst = max(worst, float(np.maximum(points @ a_ub.T - b_ub, 0.0).max()))
    worst = max(worst, float(np.maximum(-points, 0.0).max()))
    if worst > 1e-9:
        raise NumericalError(
            f"enumerated vertices violate the constraints by {worst:.3g}; "
            "the feasible set may not lie inside the probability box"
        )
    points = points.copy()
    points[points < 0.0] = 0.0
    return points
