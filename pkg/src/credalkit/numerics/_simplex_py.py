"""Dense two-phase simplex kernel, pure-Python reference backend.

Solves ``min c.x  s.t.  A x = b, x >= 0`` with ``b >= 0`` on entry.  Bland's
smallest-index rule decides the entering column, and the ratio test breaks
ties toward the smallest basic variable index, so the pivot sequence is
deterministic and cycling-free.  The kernel reports only the final basis and
the surviving rows; the caller re-factorises that basis with exact linear
algebra, which keeps the reported primal/dual vectors free of pivot drift.

Phase 1 minimises the sum of one artificial variable per row.  Artificials
that are still basic afterwards are pivoted out on the largest available
real-column entry; rows where no such entry exists are redundant and are
dropped (their multipliers are zero in any dual solution of the reduced
system).

Status codes: 0 optimal, 1 infeasible, 2 unbounded, 3 numerical failure
(iteration limit, or an impossible phase-1 outcome).
"""

import numpy as np

OPTIMAL = 0
INFEASIBLE = 1
UNBOUNDED = 2
FAILED = 3

RC_TOL = 1e-10      # reduced-cost threshold for entering candidates
PIVOT_TOL = 1e-10   # smallest pivot magnitude accepted in the ratio test
DRIVE_TOL = 1e-7    # smallest pivot used when forcing artificials out
FEAS_TOL = 1e-9     # phase-1 objective above this means infeasible


def _pivot(t, basis, row, col):
    t[row] /= t[row, col]
    coef = t[:, col].copy()
    coef[row] = 0.0
    t -= np.outer(coef, t[row])
    t[:, col] = 0.0
    t[row, col] = 1.0
    basis[row] = col


def _iterate(t, basis, limit_col, max_iter):
    """Pivot until optimal/unbounded.  Columns >= limit_col never enter."""
    m = t.shape[0] - 1
    for _ in range(max_iter):
        reduced = t[m, :limit_col]
        candidates = np.nonzero(reduced < -RC_TOL)[0]
        if candidates.size == 0:
            return OPTIMAL
        enter = int(candidates[0])
        col = t[:m, enter]
        positive = col > PIVOT_TOL
        if not positive.any():
            return UNBOUNDED
        ratios = np.full(m, np.inf)
        ratios[positive] = t[:m, -1][positive] / col[positive]
        best = ratios.min()
        window = 1e-9 * (1.0 + abs(best))
        ties = np.nonzero(ratios <= best + window)[0]
        leave = int(ties[np.argmin(basis[ties])])
        _pivot(t, basis, leave, enter)
    return FAILED


def solve_standard(a, b, c, max_iter):
    """Run both phases; return (status, basis, rowmap).

    ``basis`` holds one column index per surviving row, ``rowmap`` the
    original index of each surviving row.
    """
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    c = np.ascontiguousarray(c, dtype=np.float64)
    m, n = a.shape

    t = np.zeros((m + 1, n + m + 1))
    t[:m, :n] = a
    t[:m, n:n + m] = np.eye(m)
    t[:m, -1] = b
    # phase-1 objective (sum of artificials) priced out against the basis
    t[m, :n] = -a.sum(axis=0)
    t[m, -1] = -b.sum()
    basis = np.arange(n, n + m, dtype=np.int64)
    rowmap = np.arange(m, dtype=np.int64)

    status = _iterate(t, basis, n, max_iter)
    if status != OPTIMAL:
        return FAILED, basis, rowmap
    if -t[m, -1] > FEAS_TOL:
        return INFEASIBLE, basis, rowmap

    # force remaining artificials out of the basis; drop redundant rows
    drop = []
    for i in range(m):
        if basis[i] < n:
            continue
        row = np.abs(t[i, :n])
        j = int(np.argmax(row))
        if row[j] > DRIVE_TOL:
            _pivot(t, basis, i, j)
        else:
            drop.append(i)
    if drop:
        keep = np.array([i for i in range(m) if i not in set(drop)], dtype=np.int64)
        t = np.vstack([t[keep], t[m:m + 1]])
        basis = basis[keep]
        rowmap = rowmap[keep]
    m2 = basis.shape[0]

    # phase 2: rebuild the objective row for the real costs
    t[m2, :] = 0.0
    t[m2, :n] = c
    t[m2] -= c[basis] @ t[:m2]

    status = _iterate(t, basis, n, max_iter)
    return status, basis.copy(), rowmap.copy()
