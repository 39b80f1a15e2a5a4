"""Finite two-variable probability primitives.

Everything downstream works with a joint distribution of an observation
variable X and an outcome variable Y on small labelled spaces, a loss table
over outcomes and actions, and (possibly randomized) decision rules mapping
observations to action distributions.  Arrays are laid out with X indexing
rows and Y indexing columns; losses are Y x A; rules are X x A.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionError,
    SizeLimitError,
    ValidationError,
    ZeroProbabilityError,
)

MAX_LABELS = 16
SUM_TOL = 1e-9
POSITIVE_MASS = 1e-12
_META_CHARS = set(",;:=|")


def _check_labels(labels, what):
    labels = tuple(labels)
    if not labels:
        raise ValidationError(f"{what} labels must be nonempty")
    if len(labels) > MAX_LABELS:
        raise SizeLimitError(f"{what} has {len(labels)} labels; the limit is {MAX_LABELS}")
    for lab in labels:
        if not isinstance(lab, str) or not lab:
            raise ValidationError(f"{what} labels must be nonempty strings, got {lab!r}")
        if _META_CHARS & set(lab):
            raise ValidationError(
                f"{what} label {lab!r} contains one of the reserved characters ',;:=|'"
            )
    if len(set(labels)) != len(labels):
        raise ValidationError(f"{what} labels must be unique")
    return labels


@dataclass(frozen=True)
class SpaceSpec:
    """Labelled observation (X), outcome (Y), and action (A) spaces."""

    x_labels: tuple
    y_labels: tuple
    a_labels: tuple

    def __post_init__(self):
        object.__setattr__(self, "x_labels", _check_labels(self.x_labels, "X"))
        object.__setattr__(self, "y_labels", _check_labels(self.y_labels, "Y"))
        object.__setattr__(self, "a_labels", _check_labels(self.a_labels, "A"))

    @property
    def nx(self):
        return len(self.x_labels)

    @property
    def ny(self):
        return len(self.y_labels)

    @property
    def na(self):
        return len(self.a_labels)

    def x_index(self, label):
        return _index_of(self.x_labels, label, "X")

    def y_index(self, label):
        return _index_of(self.y_labels, label, "Y")

    def a_index(self, label):
        return _index_of(self.a_labels, label, "A")


def _index_of(labels, label, what):
    try:
        return labels.index(label)
    except ValueError:
        raise ValidationError(f"unknown {what} label {label!r}; known: {labels}") from None


def _check_table(table, shape, what):
    table = np.asarray(table, dtype=np.float64)
    if table.shape != shape:
        raise DimensionError(f"{what} must have shape {shape}, got {table.shape}")
    if not np.isfinite(table).all():
        raise ValidationError(f"{what} entries must be finite")
    return table


class JointDist:
    """A single joint distribution of (X, Y) on a :class:`SpaceSpec`."""

    __slots__ = ("space", "weights")

    def __init__(self, space, weights):
        weights = _check_table(weights, (space.nx, space.ny), "joint weights")
        if weights.min() < -SUM_TOL:
            raise ValidationError(f"joint weights must be nonnegative, min={weights.min():.3g}")
        total = weights.sum()
        if abs(total - 1.0) > SUM_TOL:
            raise ValidationError(f"joint weights must sum to 1, got {total!r}")
        weights = weights.copy()
        weights[weights < 0.0] = 0.0
        weights.flags.writeable = False
        self.space = space
        self.weights = weights

    @classmethod
    def uniform(cls, space):
        return cls(space, np.full((space.nx, space.ny), 1.0 / (space.nx * space.ny)))

    @classmethod
    def from_product(cls, space, x_marginal, y_marginal):
        x_marginal = np.asarray(x_marginal, dtype=np.float64)
        y_marginal = np.asarray(y_marginal, dtype=np.float64)
        return cls(space, np.outer(x_marginal, y_marginal))

    def prob(self, event):
        if event.space is not self.space and event.space != self.space:
            raise DimensionError("event and distribution use different spaces")
        return float(self.weights[event.mask()].sum())

    def __repr__(self):
        return f"JointDist({self.weights.tolist()})"


@dataclass(frozen=True)
class Event:
    """A subset of the joint outcome space, stored as index pairs."""

    space: SpaceSpec
    cells: frozenset

    def __post_init__(self):
        if not self.cells:
            raise ValidationError("an event needs at least one cell")
        for ix, iy in self.cells:
            if not (0 <= ix < self.space.nx and 0 <= iy < self.space.ny):
                raise ValidationError(f"event cell ({ix}, {iy}) is out of range")

    @classmethod
    def from_pairs(cls, space, pairs):
        cells = frozenset((space.x_index(x), space.y_index(y)) for x, y in pairs)
        return cls(space, cells)

    @classmethod
    def x_in(cls, space, labels):
        idx = [space.x_index(x) for x in labels]
        return cls(space, frozenset((ix, iy) for ix in idx for iy in range(space.ny)))

    @classmethod
    def x_equals(cls, space, label):
        return cls.x_in(space, [label])

    @classmethod
    def y_in(cls, space, labels):
        idx = [space.y_index(y) for y in labels]
        return cls(space, frozenset((ix, iy) for iy in idx for ix in range(space.nx)))

    @classmethod
    def y_equals(cls, space, label):
        return cls.y_in(space, [label])

    def mask(self):
        mask = np.zeros((self.space.nx, self.space.ny), dtype=bool)
        for ix, iy in self.cells:
            mask[ix, iy] = True
        return mask

    def __len__(self):
        return len(self.cells)


class LossFn:
    """Loss table L(y, a): rows are outcomes, columns are actions."""

    __slots__ = ("space", "table")

    def __init__(self, space, table):
        self.space = space
        self.table = _check_table(table, (space.ny, space.na), "loss table")
        self.table = self.table.copy()
        self.table.flags.writeable = False

    @classmethod
    def zero_one(cls, space):
        """0/1 loss for predicting the outcome; requires matching labels."""
        if space.a_labels != space.y_labels:
            raise ValidationError("zero-one loss needs action labels equal to outcome labels")
        return cls(space, 1.0 - np.eye(space.ny))


class DecisionRule:
    """Observation-indexed action distributions: rows are X, columns A."""

    __slots__ = ("space", "table")

    def __init__(self, space, table):
        table = _check_table(table, (space.nx, space.na), "decision rule")
        if table.min() < -SUM_TOL:
            raise ValidationError("decision rule rows must be nonnegative")
        sums = table.sum(axis=1)
        if np.abs(sums - 1.0).max() > SUM_TOL:
            raise ValidationError(f"decision rule rows must sum to 1, got {sums}")
        table = table.copy()
        table[table < 0.0] = 0.0
        table.flags.writeable = False
        self.space = space
        self.table = table

    @classmethod
    def uniform(cls, space):
        return cls(space, np.full((space.nx, space.na), 1.0 / space.na))

    @classmethod
    def deterministic(cls, space, mapping):
        """Build from a {x label: action label} mapping."""
        table = np.zeros((space.nx, space.na))
        for x, a in mapping.items():
            table[space.x_index(x), space.a_index(a)] = 1.0
        if (table.sum(axis=1) == 0.0).any():
            missing = [space.x_labels[i] for i in np.nonzero(table.sum(axis=1) == 0.0)[0]]
            raise ValidationError(f"mapping does not cover observations {missing}")
        return cls(space, table)

    def loss_matrix(self, loss):
        """Per-cell expected loss: entry (x, y) is sum_a rule(x,a) L(y,a)."""
        return self.table @ loss.table.T

    def is_constant(self, tol=SUM_TOL):
        return bool(np.abs(self.table - self.table[0]).max() <= tol)


def condition(p, event):
    """Bayes-condition a single joint distribution on an event."""
    mass = p.prob(event)
    if mass <= POSITIVE_MASS:
        raise ZeroProbabilityError(
            f"event has probability {mass:.3g}; conditioning needs positive mass"
        )
    weights = p.weights * event.mask()
    return JointDist(p.space, weights / mass)


def marginal_x(p):
    return p.weights.sum(axis=1)


def marginal_y(p):
    return p.weights.sum(axis=0)


def expected_loss(p, rule, loss):
    """Expected loss of a randomized rule under one joint distribution."""
    if rule.space != p.space or loss.space != p.space:
        raise DimensionError("distribution, rule, and loss must share a space")
    return float((p.weights * rule.loss_matrix(loss)).sum())
