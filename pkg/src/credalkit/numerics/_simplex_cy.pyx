# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of the pure-Python simplex kernel.

Same tableau layout, same Bland entering rule, same ratio-test tie break,
same tolerances; only the inner loops are typed.  Both kernels return the
final basis and surviving rows, and the caller re-factorises the basis, so
results agree with the reference backend to the last bit of that
factorisation.
"""

import numpy as np

OPTIMAL = 0
INFEASIBLE = 1
UNBOUNDED = 2
FAILED = 3

cdef double RC_TOL = 1e-10
cdef double PIVOT_TOL = 1e-10
cdef double DRIVE_TOL = 1e-7
cdef double FEAS_TOL = 1e-9


cdef void _pivot(double[:, ::1] t, long long[::1] basis,
                 Py_ssize_t row, Py_ssize_t col) noexcept:
    cdef Py_ssize_t nr = t.shape[0]
    cdef Py_ssize_t nc = t.shape[1]
    cdef Py_ssize_t i, j
    cdef double piv = t[row, col]
    cdef double f
    for j in range(nc):
        t[row, j] /= piv
    for i in range(nr):
        if i == row:
            continue
        f = t[i, col]
        if f != 0.0:
            for j in range(nc):
                t[i, j] -= f * t[row, j]
    for i in range(nr):
        t[i, col] = 0.0
    t[row, col] = 1.0
    basis[row] = col


cdef int _iterate(double[:, ::1] t, long long[::1] basis,
                  Py_ssize_t limit_col, long max_iter) noexcept:
    cdef Py_ssize_t m = t.shape[0] - 1
    cdef Py_ssize_t rhs = t.shape[1] - 1
    cdef Py_ssize_t i, enter, leave
    cdef long it
    cdef double a, r, best, window
    for it in range(max_iter):
        enter = -1
        for i in range(limit_col):
            if t[m, i] < -RC_TOL:
                enter = i
                break
        if enter < 0:
            return OPTIMAL
        best = 0.0
        leave = -1
        for i in range(m):
            a = t[i, enter]
            if a > PIVOT_TOL:
                r = t[i, rhs] / a
                if leave < 0 or r < best:
                    best = r
                    leave = i
        if leave < 0:
            return UNBOUNDED
        # re-scan for ratio ties, preferring the smallest basic index
        window = 1e-9 * (1.0 + (best if best >= 0 else -best))
        for i in range(m):
            a = t[i, enter]
            if a > PIVOT_TOL:
                r = t[i, rhs] / a
                if r <= best + window and basis[i] < basis[leave]:
                    leave = i
        _pivot(t, basis, leave, enter)
    return FAILED


def solve_standard(a, b, c, max_iter):
    """Run both phases; return (status, basis, rowmap)."""
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    c = np.ascontiguousarray(c, dtype=np.float64)
    cdef Py_ssize_t m = a.shape[0]
    cdef Py_ssize_t n = a.shape[1]

    t_arr = np.zeros((m + 1, n + m + 1))
    t_arr[:m, :n] = a
    t_arr[:m, n:n + m] = np.eye(m)
    t_arr[:m, -1] = b
    t_arr[m, :n] = -a.sum(axis=0)
    t_arr[m, -1] = -b.sum()
    basis_arr = np.arange(n, n + m, dtype=np.int64)
    rowmap_arr = np.arange(m, dtype=np.int64)

    cdef double[:, ::1] t = t_arr
    cdef long long[::1] basis = basis_arr

    cdef int status = _iterate(t, basis, n, max_iter)
    if status != OPTIMAL:
        return FAILED, basis_arr, rowmap_arr
    if -t_arr[m, -1] > FEAS_TOL:
        return INFEASIBLE, basis_arr, rowmap_arr

    cdef Py_ssize_t i, j, jbest
    cdef double mag, magbest
    drop = []
    for i in range(m):
        if basis[i] < n:
            continue
        jbest = 0
        magbest = 0.0
        for j in range(n):
            mag = t[i, j] if t[i, j] >= 0 else -t[i, j]
            if mag > magbest:
                magbest = mag
                jbest = j
        if magbest > DRIVE_TOL:
            _pivot(t, basis, i, jbest)
        else:
            drop.append(i)
    if drop:
        keep = np.array([i for i in range(m) if i not in set(drop)],
                        dtype=np.int64)
        t_arr = np.vstack([t_arr[keep], t_arr[m:m + 1]])
        basis_arr = basis_arr[keep]
        rowmap_arr = rowmap_arr[keep]
        t = t_arr
        basis = basis_arr
    cdef Py_ssize_t m2 = basis_arr.shape[0]

    t_arr[m2, :] = 0.0
    t_arr[m2, :n] = c
    t_arr[m2] -= c[basis_arr] @ t_arr[:m2]

    status = _iterate(t, basis, n, max_iter)
    return status, basis_arr.copy(), rowmap_arr.copy()
