"""Linear programs with equality rows, <=-rows, and per-variable lower bounds.

The public entry point is :func:`solve_lp`.  The program

    min c.x   s.t.   a_eq x = b_eq,   a_ub x <= b_ub,   x >= lower

(``lower[j] = -inf`` makes x_j free) is shifted to standard form — all
variables nonnegative, equality rows only — and handed to one of two
interchangeable simplex kernels.  The kernel only reports which basis it
stopped in; this module then re-factorises that basis, so the reported
primal/dual vectors carry no pivoting drift, and certifies the result:

* primal feasibility within 1e-9,
* dual feasibility and complementary slackness within 1e-7,
* duality gap within 1e-7.

A solve that cannot be certified raises :class:`NumericalError` rather than
returning a silently wrong answer.

Dual sign convention: equality rows get free multipliers ``dual_eq``,
<=-rows get nonpositive multipliers ``dual_ub``, and for a bounded variable
the reduced cost ``rc_j = c_j - (a_eq^T dual_eq + a_ub^T dual_ub)_j`` is the
multiplier of its lower bound.  The dual objective is then

    dual_eq . b_eq + dual_ub . b_ub + sum_j rc_j * lower_j .
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionError, NumericalError
from . import backend

PRIMAL_TOL = 1e-9
DUAL_TOL = 1e-7
GAP_TOL = 1e-7

_STATUS = {0: "optimal", 1: "infeasible", 2: "unbounded"}

# Running evidence that every certified solve stayed within tolerance.
solve_stats = {
    "optimal_solves": 0,
    "max_primal_residual": 0.0,
    "max_dual_residual": 0.0,
    "max_slackness_residual": 0.0,
    "max_duality_gap": 0.0,
}


def reset_stats():
    solve_stats.update(
        optimal_solves=0,
        max_primal_residual=0.0,
        max_dual_residual=0.0,
        max_slackness_residual=0.0,
        max_duality_gap=0.0,
    )


def _as_matrix(a, b, n, what):
    if a is None or (hasattr(a, "__len__") and len(a) == 0):
        return np.zeros((0, n)), np.zeros(0)
    a = np.asarray(a, dtype=np.float64)
    b = np.atleast_1d(np.asarray(b, dtype=np.float64))
    if a.ndim != 2 or a.shape[1] != n:
        raise DimensionError(f"{what} matrix must be 2-d with {n} columns, got shape {a.shape}")
    if b.shape != (a.shape[0],):
        raise DimensionError(f"{what} rhs length {b.shape} does not match {a.shape[0]} rows")
    if not (np.isfinite(a).all() and np.isfinite(b).all()):
        raise DimensionError(f"{what} rows must be finite")
    return a, b


@dataclass
class LinearProgram:
    """min c.x  s.t.  a_eq x = b_eq, a_ub x <= b_ub, x >= lower."""

    c: np.ndarray
    a_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None
    a_ub: np.ndarray | None = None
    b_ub: np.ndarray | None = None
    lower: np.ndarray | None = None  # -inf entries mark free variables

    def __post_init__(self):
        self.c = np.atleast_1d(np.asarray(self.c, dtype=np.float64))
        if self.c.ndim != 1 or self.c.size == 0:
            raise DimensionError("objective must be a nonempty vector")
        if not np.isfinite(self.c).all():
            raise DimensionError("objective must be finite")
        n = self.c.size
        self.a_eq, self.b_eq = _as_matrix(self.a_eq, self.b_eq, n, "equality")
        self.a_ub, self.b_ub = _as_matrix(self.a_ub, self.b_ub, n, "inequality")
        if self.lower is None:
            self.lower = np.zeros(n)
        else:
            self.lower = np.atleast_1d(np.asarray(self.lower, dtype=np.float64))
            if self.lower.shape != (n,):
                raise DimensionError("lower-bound vector length mismatch")
            if np.isposinf(self.lower).any() or np.isnan(self.lower).any():
                raise DimensionError("lower bounds must be finite or -inf")

    @property
    def n(self):
        return self.c.size


@dataclass
class LpResiduals:
    primal: float
    dual: float
    slackness: float
    gap: float


@dataclass
class LpSolution:
    status: str
    x: np.ndarray | None = None
    objective: float | None = None
    dual_eq: np.ndarray | None = None
    dual_ub: np.ndarray | None = None
    dual_objective: float | None = None
    residuals: LpResiduals | None = None
    backend: str = field(default="", repr=False)


def _solve_without_rows(lp):
    """Degenerate case: no constraint rows at all."""
    free = np.isneginf(lp.lower)
    unbounded = (free & (lp.c != 0.0)).any() or ((~free) & (lp.c < 0.0)).any()
    if unbounded:
        return LpSolution(status="unbounded")
    x = np.where(free, 0.0, lp.lower)
    obj = float(lp.c @ x)
    return LpSolution(
        status="optimal",
        x=x,
        objective=obj,
        dual_eq=np.zeros(0),
        dual_ub=np.zeros(0),
        dual_objective=obj,
        residuals=LpResiduals(0.0, 0.0, 0.0, 0.0),
    )


def solve_lp(lp, backend_name=None, max_iter=None):
    """Solve ``lp``; return a certified :class:`LpSolution`.

    Statuses 'infeasible' and 'unbounded' carry no vectors.  For 'optimal'
    the residuals are checked against the module tolerances and recorded in
    ``solve_stats``.
    """
    kern = backend.get_kernel(backend_name)
    n = lp.n
    m_eq, m_ub = lp.a_eq.shape[0], lp.a_ub.shape[0]
    if m_eq + m_ub == 0:
        return _solve_without_rows(lp)

    free = np.isneginf(lp.lower)
    shift = np.where(free, 0.0, lp.lower)

    # column layout: one column per variable, then one extra (negated) column
    # per free variable, then one slack per <=-row
    pos_col = np.arange(n)
    neg_col = np.full(n, -1)
    next_col = n
    for j in np.nonzero(free)[0]:
        neg_col[j] = next_col
        next_col += 1
    n_slack = m_ub
    n_std = next_col + n_slack

    a_user = np.vstack([lp.a_eq, lp.a_ub])
    b_user = np.concatenate(
        [lp.b_eq - lp.a_eq @ shift, lp.b_ub - lp.a_ub @ shift]
    )
    a_std = np.zeros((m_eq + m_ub, n_std))
    a_std[:, :n] = a_user
    for j in np.nonzero(free)[0]:
        a_std[:, neg_col[j]] = -a_user[:, j]
    a_std[m_eq:, next_col:] = np.eye(m_ub)
    c_std = np.zeros(n_std)
    c_std[:n] = lp.c
    for j in np.nonzero(free)[0]:
        c_std[neg_col[j]] = -lp.c[j]

    # kernel wants b >= 0; flipping a row flips its multiplier's sign
    sign = np.where(b_user < 0.0, -1.0, 1.0)
    a_k = a_std * sign[:, None]
    b_k = b_user * sign

    if max_iter is None:
        max_iter = 500 + 50 * (a_k.shape[0] + a_k.shape[1])
    status_code, basis, rowmap = kern.solve_standard(a_k, b_k, c_std, max_iter)
    if status_code == 3:
        raise NumericalError("simplex kernel failed to converge")
    if status_code != 0:
        return LpSolution(status=_STATUS[status_code])

    # re-factorise the final basis against the exact input data
    bmat = a_k[np.ix_(rowmap, basis)]
    try:
        x_basic = np.linalg.solve(bmat, b_k[rowmap])
        y_kept = np.linalg.solve(bmat.T, c_std[basis])
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"final basis is singular: {exc}") from None
    z = np.zeros(n_std)
    z[basis] = x_basic
    y = np.zeros(m_eq + m_ub)
    y[rowmap] = y_kept
    y *= sign

    x = z[:n] + shift
    for j in np.nonzero(free)[0]:
        x[j] = z[j] - z[neg_col[j]]
    dual_eq = y[:m_eq]
    dual_ub = y[m_eq:]

    return _certify(lp, x, dual_eq, dual_ub, free)


def _certify(lp, x, dual_eq, dual_ub, free):
    primal = 0.0
    if lp.a_eq.shape[0]:
        primal = max(primal, float(np.abs(lp.a_eq @ x - lp.b_eq).max()))
    if lp.a_ub.shape[0]:
        primal = max(primal, float(np.maximum(lp.a_ub @ x - lp.b_ub, 0.0).max()))
    bounded = ~free
    if bounded.any():
        primal = max(primal, float(np.maximum(lp.lower[bounded] - x[bounded], 0.0).max()))

    rc = lp.c - lp.a_eq.T @ dual_eq - lp.a_ub.T @ dual_ub
    dual = 0.0
    if bounded.any():
        dual = max(dual, float(np.maximum(-rc[bounded], 0.0).max()))
    if free.any():
        dual = max(dual, float(np.abs(rc[free]).max()))
    if dual_ub.shape[0]:
        dual = max(dual, float(np.maximum(dual_ub, 0.0).max()))

    slack = 0.0
    if bounded.any():
        slack = max(slack, float(np.abs(rc[bounded] * (x[bounded] - lp.lower[bounded])).max()))
    if dual_ub.shape[0]:
        slack = max(slack, float(np.abs(dual_ub * (lp.a_ub @ x - lp.b_ub)).max()))

    objective = float(lp.c @ x)
    dual_objective = float(dual_eq @ lp.b_eq + dual_ub @ lp.b_ub)
    if bounded.any():
        dual_objective += float(rc[bounded] @ lp.lower[bounded])
    gap = abs(objective - dual_objective)

    if primal > PRIMAL_TOL or dual > DUAL_TOL or slack > DUAL_TOL or gap > GAP_TOL:
        raise NumericalError(
            "cannot certify LP solution: "
            f"primal={primal:.3g} dual={dual:.3g} slack={slack:.3g} gap={gap:.3g}"
        )

    solve_stats["optimal_solves"] += 1
    solve_stats["max_primal_residual"] = max(solve_stats["max_primal_residual"], primal)
    solve_stats["max_dual_residual"] = max(solve_stats["max_dual_residual"], dual)
    solve_stats["max_slackness_residual"] = max(solve_stats["max_slackness_residual"], slack)
    solve_stats["max_duality_gap"] = max(solve_stats["max_duality_gap"], gap)

    return LpSolution(
        status="optimal",
        x=x,
        objective=objective,
        dual_eq=dual_eq,
        dual_ub=dual_ub,
        dual_objective=dual_objective,
        residuals=LpResiduals(primal, dual, slack, gap),
        backend=backend.backend_name(),
    )
