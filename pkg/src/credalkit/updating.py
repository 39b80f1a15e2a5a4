"""Partition-based updating of credal sets, and how to rank such updates.

An update rule assigns to each observation a credal set to be used after
seeing it.  The family studied here conditions the prior set on the cell of
a partition of the observation space ("coarsening before conditioning"):
the finest partition gives ordinary conditioning, the coarsest gives the
prior itself, and intermediate partitions interpolate.

Calibration is the soundness requirement: group observations by the outcome
marginal set their entry induces; conditioning any member of the prior set
on such a group (as an event) must land inside that group's set.  Narrower
calibrated rules are better informed; ``sharp_search`` enumerates every
partition (observation spaces up to 6 values) and keeps the tables no other
table is strictly narrower than.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .core import Event, JointDist, condition, marginal_y, DecisionRule
from .credal import (
    CredalSet,
    IRREDUNDANT_TOL,
    MarginalSet,
    credal_condition,
    credal_marginal_y,
    credal_subset,
)
from .decision import action_minimax
from .errors import (
    EmptyConditionalError,
    SizeLimitError,
    ValidationError,
)

SHARP_SEARCH_MAX_X = 6


@dataclass(frozen=True)
class Partition:
    """A partition of the observation labels into disjoint covering cells."""

    labels: tuple          # the full observation label tuple, in space order
    cells: tuple           # tuple of tuples of labels

    def __post_init__(self):
        seen = []
        for cell in self.cells:
            if not cell:
                raise ValidationError("partition cells must be nonempty")
            seen.extend(cell)
        if sorted(seen) != sorted(self.labels) or len(seen) != len(set(seen)):
            raise ValidationError(
                f"cells {self.cells} do not partition the labels {self.labels}"
            )
        order = {lab: i for i, lab in enumerate(self.labels)}
        canon = tuple(
            tuple(sorted(cell, key=order.__getitem__)) for cell in self.cells
        )
        canon = tuple(sorted(canon, key=lambda cell: order[cell[0]]))
        object.__setattr__(self, "cells", canon)

    @classmethod
    def singletons(cls, space):
        return cls(space.x_labels, tuple((x,) for x in space.x_labels))

    @classmethod
    def one_cell(cls, space):
        return cls(space.x_labels, (tuple(space.x_labels),))

    @classmethod
    def parse(cls, space, text):
        """Parse 'a,b;c' into cells {a,b} and {c}."""
        cells = tuple(
            tuple(lab.strip() for lab in chunk.split(",") if lab.strip())
            for chunk in text.split(";")
            if chunk.strip()
        )
        return cls(space.x_labels, cells)

    def cell_of(self, x):
        for cell in self.cells:
            if x in cell:
                return cell
        raise ValidationError(f"label {x!r} is not in this partition")

    def __str__(self):
        return ";".join(",".join(cell) for cell in self.cells)


def all_partitions(space):
    """Every partition of the observation labels, in a deterministic order.

    Generated from restricted-growth strings in lexicographic order, so the
    singleton partition is last and the one-cell partition first.
    """
    labels = space.x_labels
    n = len(labels)

    def grow(prefix, maxval):
        if len(prefix) == n:
            yield prefix
            return
        for v in range(maxval + 2):
            yield from grow(prefix + (v,), max(maxval, v))

    for rgs in grow((0,), 0):
        ncell = max(rgs) + 1
        cells = [[] for _ in range(ncell)]
        for lab, c in zip(labels, rgs):
            cells[c].append(lab)
        yield Partition(labels, tuple(tuple(c) for c in cells))


@dataclass(frozen=True)
class UpdateRuleTable:
    """Observation-indexed credal sets, with where they came from.

    ``entries[x]`` is None when the rule is undefined at x (no member of
    the prior set can realise x's cell).
    """

    space: object
    entries: dict
    provenance: str          # 'cell-conditioning' | 'vacuous' | 'external'
    partition: Partition | None = None

    def __post_init__(self):
        missing = [x for x in self.space.x_labels if x not in self.entries]
        if missing:
            raise ValidationError(f"update table lacks entries for {missing}")
        for x, entry in self.entries.items():
            if entry is not None and entry.space != self.space:
                raise ValidationError(f"entry at {x!r} lives on a different space")

    def defined_x(self):
        return tuple(x for x in self.space.x_labels if self.entries[x] is not None)

    def outcome_set(self, x):
        entry = self.entries[x]
        return None if entry is None else credal_marginal_y(entry)


def c_conditioning(p, partition):
    """Condition the prior set on each cell of the partition.

    All observations in one cell share the same conditioned set; cells no
    member can realise yield undefined entries.
    """
    if tuple(partition.labels) != tuple(p.space.x_labels):
        raise ValidationError("partition labels do not match the space")
    entries = {}
    for cell in partition.cells:
        event = Event.x_in(p.space, cell)
        try:
            cond = credal_condition(p, event)
        except EmptyConditionalError:
            cond = None
        for x in cell:
            entries[x] = cond
    return UpdateRuleTable(
        space=p.space, entries=entries, provenance="cell-conditioning", partition=partition
    )


def vacuous_table(p):
    """The completely uninformative rule: the full simplex at every x."""
    space = p.space
    dim = space.nx * space.ny
    corners = [
        np.eye(dim)[i].reshape(space.nx, space.ny) for i in range(dim)
    ]
    full = CredalSet(space, corners)
    return UpdateRuleTable(
        space=space,
        entries={x: full for x in space.x_labels},
        provenance="vacuous",
        partition=None,
    )


def rule_from_update(table, loss):
    """Act optimally against each entry; uniform rows where undefined."""
    space = table.space
    rows = np.full((space.nx, space.na), 1.0 / space.na)
    solved = {}
    for x in table.defined_x():
        entry = table.entries[x]
        key = id(entry)
        if key not in solved:
            solved[key] = action_minimax(
                credal_marginal_y(entry), loss, prefer="flattest"
            ).rho
        rows[space.x_index(x)] = solved[key]
    return DecisionRule(space, rows)


@dataclass(frozen=True)
class CalibrationClass:
    outcome_set: MarginalSet
    xs: tuple


@dataclass(frozen=True)
class CalibrationViolation:
    vertex_index: int
    class_index: int
    residual: float


@dataclass(frozen=True)
class CalibrationReport:
    classes: tuple
    violations: tuple
    skipped: tuple            # (vertex, class) pairs with zero event mass
    undefined_x: tuple

    @property
    def calibrated(self):
        return not self.violations

    def as_dict(self):
        return {
            "calibrated": self.calibrated,
            "classes": [
                {"xs": list(c.xs), "n_outcome_vertices": c.outcome_set.n_vertices}
                for c in self.classes
            ],
            "violations": [
                {"vertex": v.vertex_index, "class": v.class_index, "residual": v.residual}
                for v in self.violations
            ],
            "skipped": [list(s) for s in self.skipped],
            "undefined_x": list(self.undefined_x),
        }


def check_calibration(p, table, tol=1e-6):
    """Verify the entries against what conditioning on their level sets gives.

    Observations are grouped into classes by equality of their entry's
    outcome marginal set; for each class, every member of the prior set with
    mass on the class (taken as an observation event) is conditioned on it,
    and the conditional outcome marginal must lie in the class's set within
    ``tol``.  Members (vertices) with zero mass on a class are skipped and
    listed.  Checking the prior's vertices suffices: conditioning is
    linear-fractional, so conditionals of mixtures are mixtures of
    conditionals of the vertices, and the class set is convex.
    """
    space = table.space
    defined = table.defined_x()
    classes = []
    assignment = {}
    for x in defined:
        mset = table.outcome_set(x)
        for ci, cls in enumerate(classes):
            if cls[0].equals(mset):
                classes[ci] = (cls[0], cls[1] + (x,))
                assignment[x] = ci
                break
        else:
            assignment[x] = len(classes)
            classes.append((mset, (x,)))
    class_objs = tuple(CalibrationClass(mset, xs) for mset, xs in classes)

    violations = []
    skipped = []
    for ci, cls in enumerate(class_objs):
        event = Event.x_in(space, cls.xs)
        for vi, vertex in enumerate(p.vertices):
            if vertex.prob(event) <= 1e-12:
                skipped.append((vi, ci))
                continue
            q = marginal_y(condition(vertex, event))
            residual = cls.outcome_set.membership_residual(q)
            if residual > tol:
                violations.append(CalibrationViolation(vi, ci, float(residual)))
    undefined = tuple(x for x in space.x_labels if x not in defined)
    return CalibrationReport(
        classes=class_objs,
        violations=tuple(violations),
        skipped=tuple(skipped),
        undefined_x=undefined,
    )


def _table_relation(t1, t2, tol):
    """Pointwise hull comparison of two tables' entries."""
    d1, d2 = set(t1.defined_x()), set(t2.defined_x())
    if d1 != d2:
        return "incomparable"
    sub12 = all(credal_subset(t1.entries[x], t2.entries[x], tol) for x in d1)
    sub21 = all(credal_subset(t2.entries[x], t1.entries[x], tol) for x in d1)
    if sub12 and sub21:
        return "equal"
    if sub12:
        return "narrower"
    if sub21:
        return "wider"
    return "incomparable"


def compare_narrowness(t1, t2, tol=IRREDUNDANT_TOL):
    """Is ``t1`` pointwise contained in ``t2`` ('narrower'), or the reverse?

    Requires the two tables to be defined at the same observations.
    """
    if t1.space != t2.space:
        raise ValidationError("tables live on different spaces")
    if set(t1.defined_x()) != set(t2.defined_x()):
        raise ValidationError(
            "tables are defined at different observations; narrowness is "
            "only defined on a shared domain"
        )
    return _table_relation(t1, t2, tol)


@dataclass(frozen=True)
class SharpSearchResult:
    """All cell-conditioning tables for a prior set, ranked by narrowness."""

    candidates: tuple         # (Partition, UpdateRuleTable) pairs
    relation_matrix: tuple    # relation_matrix[i][j] = relation of i to j
    minimal_indices: tuple    # candidates no other candidate strictly narrows

    @property
    def minimal(self):
        return tuple(self.candidates[i] for i in self.minimal_indices)

    def as_dict(self):
        return {
            "candidates": [str(part) for part, _ in self.candidates],
            "relation_matrix": [list(row) for row in self.relation_matrix],
            "minimal": [str(self.candidates[i][0]) for i in self.minimal_indices],
        }


def sharp_search(p, tol=IRREDUNDANT_TOL):
    """Enumerate every partition's conditioning table; keep the sharpest.

    A candidate is kept when no other candidate is strictly narrower.  The
    full pairwise relation matrix is attached so ties and incomparabilities
    are visible.  Limited to observation spaces with at most 6 values (the
    partition count grows like the Bell numbers).
    """
    space = p.space
    if space.nx > SHARP_SEARCH_MAX_X:
        raise SizeLimitError(
            f"sharp search enumerates partitions of {space.nx} observation "
            f"values; the limit is {SHARP_SEARCH_MAX_X}"
        )
    candidates = [(part, c_conditioning(p, part)) for part in all_partitions(space)]
    n = len(candidates)
    matrix = [["equal"] * n for _ in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        rel = _table_relation(candidates[i][1], candidates[j][1], tol)
        matrix[i][j] = rel
        matrix[j][i] = {
            "narrower": "wider",
            "wider": "narrower",
            "equal": "equal",
            "incomparable": "incomparable",
        }[rel]
    minimal = []
    for i in range(n):
        strictly_narrower_exists = any(
            matrix[j][i] == "narrower" for j in range(n) if j != i
        )
        if not strictly_narrower_exists:
            minimal.append(i)
    return SharpSearchResult(
        candidates=tuple(candidates),
        relation_matrix=tuple(tuple(row) for row in matrix),
        minimal_indices=tuple(minimal),
    )
