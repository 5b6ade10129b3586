"""Pure-Python kernels for the two inner loops that dominate runtime.

``multiband._speedups`` holds Cython translations of the same functions with
identical semantics and pivot/tie-breaking choices; ``multiband._kernels``
picks whichever is available.  Keep the two implementations in lockstep:
every arithmetic step here mirrors one compiled statement so both backends
produce the same iterates bit for bit.
"""

from __future__ import annotations

import itertools

import numpy as np

SIMPLEX_OPTIMAL = 0
SIMPLEX_UNBOUNDED = 1
SIMPLEX_ITER_LIMIT = 2

_PIV_TOL = 1e-9


def simplex_loop(
    T: np.ndarray,
    basis: np.ndarray,
    allowed: np.ndarray,
    bland_after: int,
    max_iter: int,
) -> tuple[int, int]:
    """Run primal simplex pivots on a prepared tableau, in place.

    ``T`` is the (m+1) x (ncols+1) dense tableau: constraint rows with the
    rhs in the last column, then the reduced-cost row (z_j - c_j of a
    maximization) with the objective value in its last cell.  ``basis``
    holds the basic column of each constraint row.  ``allowed`` masks
    columns permitted to enter.  Entering column: most negative reduced
    cost (first on ties); leaving row: least ratio, first on ties.  After
    ``bland_after`` degenerate pivots the rule switches to Bland's (lowest
    eligible column index; ties in the ratio test broken by lowest basic
    variable) to guarantee termination.

    Returns (status, pivot count).
    """
    m = T.shape[0] - 1
    ncols = T.shape[1] - 1
    mask = allowed.astype(bool)
    masked_inf = np.where(mask, 0.0, np.inf)
    degenerate = 0
    bland = False
    for it in range(max_iter):
        red = T[m, :ncols]
        if bland:
            enter = -1
            for j in range(ncols):
                if mask[j] and red[j] < -_PIV_TOL:
                    enter = j
                    break
            if enter < 0:
                return SIMPLEX_OPTIMAL, it
        else:
            scores = red + masked_inf
            enter = int(np.argmin(scores))
            if scores[enter] >= -_PIV_TOL:
                return SIMPLEX_OPTIMAL, it
        col = T[:m, enter]
        pos = col > _PIV_TOL
        if not pos.any():
            return SIMPLEX_UNBOUNDED, it
        ratios = np.where(pos, T[:m, ncols] / np.where(pos, col, 1.0), np.inf)
        best = ratios.min()
        if bland:
            ties = np.flatnonzero(ratios == best)
            leave = int(ties[np.argmin(basis[ties])])
        else:
            leave = int(np.argmin(ratios))
        if best <= _PIV_TOL:
            degenerate += 1
            if degenerate > bland_after:
                bland = True
        piv = T[leave, enter]
        T[leave, :] /= piv
        coefs = T[:, enter].copy()
        coefs[leave] = 0.0
        T -= np.outer(coefs, T[leave, :])
        T[:, enter] = 0.0
        T[leave, enter] = 1.0
        basis[leave] = enter
    return SIMPLEX_ITER_LIMIT, max_iter


def _bellman_ford(weights: np.ndarray, n_nodes: int) -> np.ndarray | None:
    """Shortest distances from the last node of a dense digraph.

    ``weights[u, v]`` is the arc weight u -> v (inf = absent).  Returns the
    distance array, or None when a negative cycle is reachable.
    """
    root = n_nodes - 1
    dist = np.full(n_nodes, np.inf)
    dist[root] = 0.0
    for _ in range(n_nodes - 1):
        changed = False
        for u in range(n_nodes):
            du = dist[u]
            if du == np.inf:
                continue
            for v in range(n_nodes):
                w = weights[u, v]
                if w == np.inf:
                    continue
                if du + w < dist[v]:
                    dist[v] = du + w
                    changed = True
        if not changed:
            break
    for u in range(n_nodes):
        du = dist[u]
        if du == np.inf:
            continue
        for v in range(n_nodes):
            w = weights[u, v]
            if w != np.inf and du + w < dist[v]:
                return None
    return dist


def sweep_feasible_w(
    values: np.ndarray,
    offsets: np.ndarray,
    dim_tail: np.ndarray,
    dim_head: np.ndarray,
    n_nodes: int,
) -> tuple[list[tuple[float, ...]], int, int]:
    """Enumerate candidate difference-constraint systems and solve each.

    Dimension ``d`` draws its value from ``values[offsets[d]:offsets[d+1]]``
    (ascending); the full cartesian product is visited in lexicographic
    order, first dimension slowest.  A dimension with ``dim_head[d] >= 0``
    contributes the constraint ``w[tail] - w[head] >= value`` (an arc
    tail -> head of weight -value); one with ``dim_head[d] == -1`` caps
    ``0 <= w[tail] <= value`` (an arc root -> tail of weight value, with
    the return arc tail -> root of weight 0 always present).  Nodes
    ``0..n_nodes-1`` are the variables, node ``n_nodes`` the root.

    Every feasible system is solved for its componentwise-maximal solution
    (shortest-path distances from the root).  Returns the distinct
    solutions in first-seen order plus the total and feasible combination
    counts.
    """
    ndim = len(dim_tail)
    total_nodes = n_nodes + 1
    root = n_nodes
    base = np.full((total_nodes, total_nodes), np.inf)
    for v in range(n_nodes):
        base[v, root] = 0.0
    ranges = [
        range(int(offsets[d]), int(offsets[d + 1])) for d in range(ndim)
    ]
    seen: set[tuple[float, ...]] = set()
    out: list[tuple[float, ...]] = []
    n_combos = 0
    n_feasible = 0
    for combo in itertools.product(*ranges):
        n_combos += 1
        weights = base.copy()
        for d in range(ndim):
            val = values[combo[d]]
            if dim_head[d] >= 0:
                weights[dim_tail[d], dim_head[d]] = -val
            else:
                weights[root, dim_tail[d]] = val
        dist = _bellman_ford(weights, total_nodes)
        if dist is None:
            continue
        n_feasible += 1
        w = tuple(float(dist[v]) for v in range(n_nodes))
        if w not in seen:
            seen.add(w)
            out.append(w)
    return out, n_combos, n_feasible
