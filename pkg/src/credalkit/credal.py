"""Convex sets of joint distributions and the operations that move them.

A credal set is kept as an irredundant list of extreme joint distributions.
Conditioning, marginalisation, recombination of marginals with conditionals,
and dilation detection all reduce to vertex arithmetic plus hull-membership
linear programs.

Conditioning keeps every member that gives the event positive mass and
conditions it; members with zero mass on the event contribute nothing.  The
result is returned as the closed convex hull of the conditioned vertices,
and a note records when some vertices were dropped on the way (the set is
then the closure of the pointwise image).
"""

from dataclasses import dataclass, field

import numpy as np

from .core import (
    POSITIVE_MASS,
    Event,
    JointDist,
    condition,
    marginal_x,
    marginal_y,
)
from .errors import (
    DimensionError,
    EmptyConditionalError,
    EmptySetError,
    SizeLimitError,
    ValidationError,
)
from .numerics import enumerate_vertices, extreme_points, membership_residual

IRREDUNDANT_TOL = 1e-8
STRICT_TOL = 1e-7
HULL_COMBINATION_LIMIT = 10**6


@dataclass(frozen=True)
class LinearConstraint:
    """coeffs . vec(P) (relation) rhs over row-major (x, y) cells."""

    coeffs: tuple
    relation: str  # "eq" or "le"
    rhs: float

    def __post_init__(self):
        if self.relation not in ("eq", "le"):
            raise ValidationError(f"relation must be 'eq' or 'le', got {self.relation!r}")
        coeffs = tuple(float(c) for c in self.coeffs)
        if not all(np.isfinite(coeffs)) or not np.isfinite(self.rhs):
            raise ValidationError("constraint coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "rhs", float(self.rhs))


class MarginalSet:
    """Polytope of distributions over a single variable's labels."""

    __slots__ = ("labels", "vertices")

    def __init__(self, labels, vertices, trusted=False):
        self.labels = tuple(labels)
        vertices = np.atleast_2d(np.asarray(vertices, dtype=np.float64))
        if vertices.shape[1] != len(self.labels):
            raise DimensionError(
                f"vertices have dimension {vertices.shape[1]}, labels {len(self.labels)}"
            )
        if vertices.shape[0] == 0:
            raise EmptySetError("a marginal set needs at least one vertex")
        if not trusted:
            vertices = extreme_points(vertices, tol=IRREDUNDANT_TOL)
        vertices = vertices.copy()
        vertices.flags.writeable = False
        self.vertices = vertices

    @property
    def n_vertices(self):
        return self.vertices.shape[0]

    def membership_residual(self, point):
        return membership_residual(self.vertices, point)

    def contains(self, point, tol=IRREDUNDANT_TOL):
        return self.membership_residual(point) <= tol

    def escape_residual(self, other):
        """Largest distance from one of my vertices to ``other``'s hull."""
        return max(other.membership_residual(v) for v in self.vertices)

    def subset_of(self, other, tol=IRREDUNDANT_TOL):
        return self.escape_residual(other) <= tol

    def equals(self, other, tol=IRREDUNDANT_TOL):
        return self.subset_of(other, tol) and other.subset_of(self, tol)

    def is_point(self, tol=IRREDUNDANT_TOL):
        return self.n_vertices == 1 or bool(
            np.abs(self.vertices - self.vertices[0]).max() <= tol
        )

    def __repr__(self):
        return f"MarginalSet({self.labels}, {self.n_vertices} vertices)"


class CredalSet:
    """Closed convex set of joint distributions in vertex form."""

    __slots__ = ("space", "vertices", "flat", "notes")

    def __init__(self, space, vertices, notes=()):
        members = []
        for v in vertices:
            if isinstance(v, JointDist):
                if v.space != space:
                    raise DimensionError("vertex space does not match the credal set")
                members.append(v.weights)
            else:
                members.append(JointDist(space, v).weights)
        if not members:
            raise EmptySetError("a credal set needs at least one member")
        flat = extreme_points(
            np.array([w.ravel() for w in members]), tol=IRREDUNDANT_TOL
        )
        self.space = space
        self.flat = flat
        self.flat.flags.writeable = False
        self.vertices = tuple(
            JointDist(space, row.reshape(space.nx, space.ny)) for row in flat
        )
        self.notes = tuple(notes)

    @property
    def n_vertices(self):
        return len(self.vertices)

    def membership_residual(self, p):
        if isinstance(p, JointDist):
            p = p.weights
        return membership_residual(self.flat, np.asarray(p).ravel())

    def contains(self, p, tol=IRREDUNDANT_TOL):
        return self.membership_residual(p) <= tol

    def __repr__(self):
        return f"{type(self).__name__}({self.n_vertices} vertices on {self.space.nx}x{self.space.ny})"


class HullSet(CredalSet):
    """Credal set produced by recombining marginals with conditionals."""


def from_constraints(space, constraints):
    """Vertex form of ``{P in simplex : constraints hold}``.

    The simplex conditions (nonnegativity, total mass one) are implicit and
    must not be restated.  Raises ``EmptySetError`` when the constraints cut
    the simplex down to nothing.
    """
    dim = space.nx * space.ny
    eq_rows, eq_rhs, ub_rows, ub_rhs = [], [], [], []
    for con in constraints:
        if not isinstance(con, LinearConstraint):
            con = LinearConstraint(*con)
        if len(con.coeffs) != dim:
            raise DimensionError(
                f"constraint has {len(con.coeffs)} coefficients; the space has {dim} cells"
            )
        if con.relation == "eq":
            eq_rows.append(con.coeffs)
            eq_rhs.append(con.rhs)
        else:
            ub_rows.append(con.coeffs)
            ub_rhs.append(con.rhs)
    eq_rows.append([1.0] * dim)
    eq_rhs.append(1.0)
    verts = enumerate_vertices(
        a_eq=np.array(eq_rows),
        b_eq=np.array(eq_rhs),
        a_ub=np.array(ub_rows) if ub_rows else None,
        b_ub=np.array(ub_rhs) if ub_rows else None,
        dim=dim,
    )
    return CredalSet(space, [v.reshape(space.nx, space.ny) for v in verts])


def credal_condition(p, event):
    """Condition every member on the event; return the closed hull.

    Members giving the event zero mass are dropped; if all of them do, the
    conditional is undefined and ``EmptyConditionalError`` is raised.
    Because the conditioning map is linear-fractional, the conditioned
    vertices of P span the conditioned set, so vertex arithmetic suffices.
    """
    survivors = []
    dropped = 0
    for v in p.vertices:
        if v.prob(event) > POSITIVE_MASS:
            survivors.append(condition(v, event))
        else:
            dropped += 1
    if not survivors:
        raise EmptyConditionalError(
            "no member of the credal set gives the event positive probability"
        )
    notes = ()
    if dropped:
        notes = (
            f"conditioning dropped {dropped} of {p.n_vertices} vertices "
            "(zero mass on the event); the result is the closure of the "
            "pointwise conditional image",
        )
    return CredalSet(p.space, survivors, notes=notes)


def credal_marginal_x(p):
    return MarginalSet(p.space.x_labels, [marginal_x(v) for v in p.vertices])


def credal_marginal_y(p):
    return MarginalSet(p.space.y_labels, [marginal_y(v) for v in p.vertices])


def condition_on_x(p, x_label):
    """Conditional credal set given X = x, or None when undefined."""
    event = Event.x_equals(p.space, x_label)
    try:
        return credal_condition(p, event)
    except EmptyConditionalError:
        return None


def conditional_y_sets(p):
    """Per-observation outcome marginal sets {x: (P | X=x)_Y or None}."""
    out = {}
    for x in p.space.x_labels:
        cond = condition_on_x(p, x)
        out[x] = None if cond is None else credal_marginal_y(cond)
    return out


def build_hull(p):
    """Recombine the X-marginal set with the per-x conditional sets.

    Every way of gluing a vertex of the X-marginal polytope to one
    conditional vertex per observation yields a candidate joint; the hull
    of all candidates is the smallest credal set with the same marginal and
    conditional information as ``p``.  It always contains ``p``.
    """
    space = p.space
    mx = credal_marginal_x(p)
    cond_vertices = {}
    for x in space.x_labels:
        cond = condition_on_x(p, x)
        cond_vertices[x] = (
            None if cond is None else np.array([v.weights[space.x_index(x)] for v in cond.vertices])
        )
        # rows above are conditional outcome distributions at this x; the
        # other rows of a conditioned vertex are zero by construction
    total = 0
    for m in mx.vertices:
        combos = 1
        for ix, x in enumerate(space.x_labels):
            if m[ix] > POSITIVE_MASS:
                if cond_vertices[x] is None:
                    raise EmptySetError(
                        f"marginal vertex gives {x!r} positive mass but the "
                        "conditional there is undefined"
                    )
                combos *= len(cond_vertices[x])
        total += combos
    if total > HULL_COMBINATION_LIMIT:
        raise SizeLimitError(
            f"hull recombination needs {total} candidates; the limit is "
            f"{HULL_COMBINATION_LIMIT}"
        )

    candidates = []
    for m in mx.vertices:
        massed = [ix for ix in range(space.nx) if m[ix] > POSITIVE_MASS]
        picks = [np.zeros((space.nx, space.ny))]
        for ix in massed:
            x = space.x_labels[ix]
            grown = []
            for base in picks:
                for q in cond_vertices[x]:
                    w = base.copy()
                    w[ix] = m[ix] * q
                    grown.append(w)
            picks = grown
        candidates.extend(picks)
    return HullSet(space, candidates)


def credal_subset(p, q, tol=IRREDUNDANT_TOL):
    """Is every member of ``p`` in ``q``?  Vertex membership suffices."""
    if p.space != q.space:
        raise DimensionError("credal sets live on different spaces")
    return all(q.membership_residual(v) <= tol for v in p.flat)


def credal_equal(p, q, tol=IRREDUNDANT_TOL):
    return credal_subset(p, q, tol) and credal_subset(q, p, tol)


@dataclass(frozen=True)
class DilationCell:
    """Dilation verdict for a single observation value."""

    x: str
    defined: bool
    is_superset: bool
    escape_residual: float  # how far the conditional set leaves the prior
    dilates: bool


@dataclass(frozen=True)
class DilationReport:
    prior_vertices: np.ndarray
    cells: tuple
    strict_tol: float = STRICT_TOL
    notes: tuple = field(default=())

    @property
    def any_dilation(self):
        return any(c.dilates for c in self.cells)

    def as_dict(self):
        return {
            "any_dilation": self.any_dilation,
            "strict_tol": self.strict_tol,
            "prior_vertices": np.asarray(self.prior_vertices).tolist(),
            "cells": [
                {
                    "x": c.x,
                    "defined": c.defined,
                    "is_superset": c.is_superset,
                    "escape_residual": c.escape_residual,
                    "dilates": c.dilates,
                }
                for c in self.cells
            ],
            "notes": list(self.notes),
        }


def detect_dilation(p, strict_tol=STRICT_TOL):
    """Find observations whose conditional outcome set strictly grows.

    For each x the conditional outcome marginal set is compared with the
    unconditional one: containment one way plus an escape residual above
    ``strict_tol`` the other way means the observation dilates the set.
    """
    prior = credal_marginal_y(p)
    cells = []
    notes = []
    for x, cond_set in conditional_y_sets(p).items():
        if cond_set is None:
            cells.append(DilationCell(x, False, False, 0.0, False))
            notes.append(f"conditional at {x!r} is undefined (zero mass everywhere)")
            continue
        is_superset = prior.subset_of(cond_set)
        escape = cond_set.escape_residual(prior)
        cells.append(
            DilationCell(x, True, is_superset, float(escape), bool(is_superset and escape > strict_tol))
        )
    return DilationReport(
        prior_vertices=prior.vertices, cells=tuple(cells), strict_tol=strict_tol, notes=tuple(notes)
    )
