# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: Cython translations of multiband._kernels_py.

Semantics, pivot choices, and tie-breaking are kept in lockstep with the
pure-Python versions so both backends produce identical iterates; see the
pure module's docstrings for the contracts.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

SIMPLEX_OPTIMAL = 0
SIMPLEX_UNBOUNDED = 1
SIMPLEX_ITER_LIMIT = 2

cdef double _PIV_TOL = 1e-9
cdef double _INF = float("inf")


def simplex_loop(
    double[:, ::1] T,
    long long[::1] basis,
    unsigned char[::1] allowed,
    long long bland_after,
    long long max_iter,
):
    """See multiband._kernels_py.simplex_loop."""
    cdef Py_ssize_t m = T.shape[0] - 1
    cdef Py_ssize_t ncols = T.shape[1] - 1
    cdef Py_ssize_t it, j, r, c, enter, leave
    cdef long long degenerate = 0
    cdef bint bland = False
    cdef double best_red, ratio, best, piv, f
    for it in range(max_iter):
        enter = -1
        if bland:
            for j in range(ncols):
                if allowed[j] and T[m, j] < -_PIV_TOL:
                    enter = j
                    break
            if enter < 0:
                return SIMPLEX_OPTIMAL, it
        else:
            best_red = _INF
            for j in range(ncols):
                if allowed[j] and T[m, j] < best_red:
                    best_red = T[m, j]
                    enter = j
            if enter < 0 or best_red >= -_PIV_TOL:
                return SIMPLEX_OPTIMAL, it
        leave = -1
        best = _INF
        for r in range(m):
            if T[r, enter] > _PIV_TOL:
                ratio = T[r, ncols] / T[r, enter]
                if ratio < best:
                    best = ratio
                    leave = r
        if leave < 0:
            return SIMPLEX_UNBOUNDED, it
        if bland:
            for r in range(m):
                if T[r, enter] > _PIV_TOL:
                    ratio = T[r, ncols] / T[r, enter]
                    if ratio == best and basis[r] < basis[leave]:
                        leave = r
        if best <= _PIV_TOL:
            degenerate += 1
            if degenerate > bland_after:
                bland = True
        piv = T[leave, enter]
        for c in range(ncols + 1):
            T[leave, c] /= piv
        for r in range(m + 1):
            if r == leave:
                continue
            f = T[r, enter]
            if f == 0.0:
                continue
            for c in range(ncols + 1):
                T[r, c] -= f * T[leave, c]
        for r in range(m + 1):
            T[r, enter] = 0.0
        T[leave, enter] = 1.0
        basis[leave] = enter
    return SIMPLEX_ITER_LIMIT, max_iter


cdef bint _bellman_ford(double[:, ::1] weights, double[::1] dist,
                        Py_ssize_t n_nodes) noexcept:
    """Distances from the last node; returns False on a negative cycle."""
    cdef Py_ssize_t root = n_nodes - 1
    cdef Py_ssize_t u, v, it
    cdef double du, w
    cdef bint changed
    for u in range(n_nodes):
        dist[u] = _INF
    dist[root] = 0.0
    for it in range(n_nodes - 1):
        changed = False
        for u in range(n_nodes):
            du = dist[u]
            if du == _INF:
                continue
            for v in range(n_nodes):
                w = weights[u, v]
                if w == _INF:
                    continue
                if du + w < dist[v]:
                    dist[v] = du + w
                    changed = True
        if not changed:
            break
    for u in range(n_nodes):
        du = dist[u]
        if du == _INF:
            continue
        for v in range(n_nodes):
            w = weights[u, v]
            if w != _INF and du + w < dist[v]:
                return False
    return True


def sweep_feasible_w(
    double[::1] values,
    long long[::1] offsets,
    long long[::1] dim_tail,
    long long[::1] dim_head,
    long long n_nodes,
):
    """See multiband._kernels_py.sweep_feasible_w."""
    cdef Py_ssize_t ndim = dim_tail.shape[0]
    cdef Py_ssize_t total = n_nodes + 1
    cdef Py_ssize_t root = n_nodes
    cdef Py_ssize_t d, v
    cdef long long n_combos = 0, n_feasible = 0
    weights_arr = np.full((total, total), _INF)
    dist_arr = np.empty(total)
    cdef double[:, ::1] weights = weights_arr
    cdef double[::1] dist = dist_arr
    idx_arr = np.zeros(ndim, dtype=np.int64)
    cdef long long[::1] idx = idx_arr
    seen = set()
    out = []
    # empty dimension ranges yield no combinations at all
    for d in range(ndim):
        if offsets[d + 1] <= offsets[d]:
            return out, 0, 0
    while True:
        n_combos += 1
        for v in range(n_nodes):
            for d in range(total):
                weights[v, d] = _INF
            weights[v, root] = 0.0
        for d in range(total):
            weights[root, d] = _INF
        for d in range(ndim):
            if dim_head[d] >= 0:
                weights[dim_tail[d], dim_head[d]] = -values[offsets[d] + idx[d]]
            else:
                weights[root, dim_tail[d]] = values[offsets[d] + idx[d]]
        if _bellman_ford(weights, dist, total):
            n_feasible += 1
            w = tuple(dist[v] for v in range(n_nodes))
            if w not in seen:
                seen.add(w)
                out.append(w)
        # odometer: rightmost dimension fastest (lexicographic order)
        d = ndim - 1
        while d >= 0:
            idx[d] += 1
            if offsets[d] + idx[d] < offsets[d + 1]:
                break
            idx[d] = 0
            d -= 1
        if d < 0:
            break
    return out, n_combos, n_feasible
