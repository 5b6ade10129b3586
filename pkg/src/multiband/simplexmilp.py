"""Self-contained LP and MILP solving on top of the simplex kernel.

Two-phase dense primal simplex (largest-reduced-cost pivoting, Bland's rule
after 3*(rows+cols) degenerate pivots) plus a best-bound branch & bound for
integer variables.  Free variables are split into differences of two
nonnegative columns before hitting the tableau.  Built for correctness and
determinism at desk scale, not for industrial LPs.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels
from .model import NominalProblem

FEAS_TOL = 1e-7
INT_TOL = 1e-6
GAP_TOL = 1e-9

DEFAULT_NODE_LIMIT = 100_000


class Status(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    LIMIT = "limit"


@dataclass(frozen=True)
class VarBound:
    """An extra single-variable bound row: ``x[var] <sense> bound``."""

    var: int
    sense: str  # "<=" or ">="
    bound: float


@dataclass(frozen=True)
class LPResult:
    status: Status
    x: np.ndarray | None
    value: float | None
    pivots: int = 0


@dataclass(frozen=True)
class MILPResult:
    status: Status
    x: np.ndarray | None
    value: float | None
    nodes: int = 0


def _pivot(T: np.ndarray, row: int, col: int) -> None:
    """One explicit pivot used when driving artificials out of the basis."""
    T[row, :] /= T[row, col]
    coefs = T[:, col].copy()
    coefs[row] = 0.0
    T -= np.outer(coefs, T[row, :])
    T[:, col] = 0.0
    T[row, col] = 1.0


def solve_lp(
    problem: NominalProblem, extra_bounds: tuple[VarBound, ...] = ()
) -> LPResult:
    """Maximize ``c'x`` over ``A x <= b`` with default ``x >= 0``.

    Integrality markers are ignored.  ``extra_bounds`` add single-variable
    bound rows (used by branch & bound).  Returns status optimal /
    infeasible / unbounded / limit; on optimal, the primal feasibility
    residual is within 1e-7 and all reduced costs are within 1e-7 of
    optimality.
    """
    n = problem.n
    rows = [problem.A]
    rhs = [problem.b]
    for vb in extra_bounds:
        row = np.zeros(n)
        if vb.sense == "<=":
            row[vb.var] = 1.0
            rows.append(row[None, :])
            rhs.append(np.array([vb.bound]))
        elif vb.sense == ">=":
            row[vb.var] = -1.0
            rows.append(row[None, :])
            rhs.append(np.array([-vb.bound]))
        else:
            raise ValueError(f"bound sense must be '<=' or '>=', got {vb.sense!r}")
    M = np.vstack(rows)
    q = np.concatenate(rhs)
    m = M.shape[0]

    free = sorted(problem.free_vars)
    neg_col = {j: n + pos for pos, j in enumerate(free)}
    nstruct = n + len(free)
    cost = np.zeros(nstruct)
    cost[:n] = problem.c
    full = np.empty((m, nstruct))
    full[:, :n] = M
    for j, cj in neg_col.items():
        full[:, cj] = -M[:, j]
        cost[cj] = -problem.c[j]

    flip = q < 0
    full[flip] *= -1.0
    q = np.where(flip, -q, q)
    art_rows = np.flatnonzero(flip)
    nart = len(art_rows)

    ncols = nstruct + m + nart
    T = np.zeros((m + 1, ncols + 1))
    T[:m, :nstruct] = full
    slack_sign = np.where(flip, -1.0, 1.0)
    T[np.arange(m), nstruct + np.arange(m)] = slack_sign
    for pos, r in enumerate(art_rows):
        T[r, nstruct + m + pos] = 1.0
    T[:m, ncols] = q

    basis = np.empty(m, dtype=np.int64)
    basis[:] = nstruct + np.arange(m)
    for pos, r in enumerate(art_rows):
        basis[r] = nstruct + m + pos

    bland_after = 3 * (m + ncols)
    max_iter = 20_000 + 200 * (m + ncols)
    pivots = 0

    if nart:
        c1 = np.zeros(ncols + 1)
        c1[nstruct + m : ncols] = -1.0
        cb = c1[basis]
        T[m, :] = cb @ T[:m, :] - c1
        allowed = np.ones(ncols, dtype=np.uint8)
        status, its = _kernels.simplex_loop(T, basis, allowed, bland_after, max_iter)
        pivots += its
        if status == _kernels.SIMPLEX_ITER_LIMIT:
            return LPResult(Status.LIMIT, None, None, pivots)
        if T[m, ncols] < -FEAS_TOL:
            return LPResult(Status.INFEASIBLE, None, None, pivots)
        art_start = nstruct + m
        drop = []
        for r in range(m):
            if basis[r] < art_start:
                continue
            entering = -1
            for c in range(art_start):
                if abs(T[r, c]) > FEAS_TOL:
                    entering = c
                    break
            if entering >= 0:
                _pivot(T, r, entering)
                basis[r] = entering
            else:
                drop.append(r)
        if drop:
            T = np.delete(T, drop, axis=0)
            basis = np.delete(basis, drop)
            m -= len(drop)

    c2 = np.zeros(ncols + 1)
    c2[:nstruct] = cost
    cb = c2[basis]
    T[m, :] = cb @ T[:m, :] - c2
    # artificial columns are barred from re-entering in phase 2
    allowed = np.ones(ncols, dtype=np.uint8)
    allowed[nstruct + len(q):] = 0
    status, its = _kernels.simplex_loop(T, basis, allowed, bland_after, max_iter)
    pivots += its
    if status == _kernels.SIMPLEX_ITER_LIMIT:
        return LPResult(Status.LIMIT, None, None, pivots)
    if status == _kernels.SIMPLEX_UNBOUNDED:
        return LPResult(Status.UNBOUNDED, None, None, pivots)

    x_std = np.zeros(ncols)
    x_std[basis] = T[:m, ncols]
    x = x_std[:n].copy()
    for j, cj in neg_col.items():
        x[j] = x_std[j] - x_std[cj]
    for j in range(n):
        if j not in problem.free_vars and -FEAS_TOL <= x[j] < 0.0:
            x[j] = 0.0
    return LPResult(Status.OPTIMAL, x, float(problem.c @ x), pivots)


def _fractional_var(x: np.ndarray, int_vars: list[int]) -> int | None:
    """Most fractional integer variable, or None if all integral."""
    best_j, best_f = None, INT_TOL
    for j in int_vars:
        f = x[j] - math.floor(x[j])
        frac = min(f, 1.0 - f)
        if frac > best_f:
            best_f = frac
            best_j = j
    return best_j


def solve_milp(
    problem: NominalProblem, node_limit: int = DEFAULT_NODE_LIMIT
) -> MILPResult:
    """Branch & bound over :func:`solve_lp` relaxations.

    Best-bound node selection, branching on the most fractional integer
    variable, children as added bound rows, nodes re-solved from scratch.
    Optimal within absolute gap 1e-6 (integers within 1e-6).  Exceeding
    ``node_limit`` reports status "limit" (hard stop, never a silent
    incumbent).
    """
    int_vars = sorted(problem.int_vars)
    root = solve_lp(problem)
    if root.status != Status.OPTIMAL:
        return MILPResult(root.status, root.x, root.value, 1)
    if not int_vars:
        return MILPResult(Status.OPTIMAL, root.x, root.value, 1)

    nodes = 1
    counter = 0
    heap: list[tuple[float, int, tuple[VarBound, ...], np.ndarray, float]] = []
    heapq.heappush(heap, (-root.value, counter, (), root.x, root.value))
    incumbent_x = None
    incumbent_val = -np.inf

    while heap:
        neg_bound, _, bounds, x, value = heapq.heappop(heap)
        if -neg_bound <= incumbent_val + GAP_TOL:
            break
        j = _fractional_var(x, int_vars)
        if j is None:
            if value > incumbent_val + GAP_TOL:
                incumbent_val = value
                incumbent_x = x
            continue
        lo = math.floor(x[j])
        for child_bound in (
            VarBound(j, "<=", lo),
            VarBound(j, ">=", lo + 1.0),
        ):
            if nodes >= node_limit:
                return MILPResult(Status.LIMIT, incumbent_x,
                                  incumbent_val if incumbent_x is not None else None,
                                  nodes)
            child = solve_lp(problem, bounds + (child_bound,))
            nodes += 1
            if child.status == Status.INFEASIBLE:
                continue
            if child.status in (Status.UNBOUNDED, Status.LIMIT):
                return MILPResult(child.status, None, None, nodes)
            if child.value <= incumbent_val + GAP_TOL:
                continue
            counter += 1
            heapq.heappush(
                heap,
                (-child.value, counter, bounds + (child_bound,), child.x, child.value),
            )

    if incumbent_x is None:
        return MILPResult(Status.INFEASIBLE, None, None, nodes)
    return MILPResult(Status.OPTIMAL, incumbent_x, float(incumbent_val), nodes)
