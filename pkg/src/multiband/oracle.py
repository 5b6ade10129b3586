"""Exhaustive reference implementations, deliberately slow and obvious.

Everything here enumerates: band assignments, worst-case deviations, binary
solution vectors.  These functions exist so the fast paths (flow-based
separation, compact counterpart, candidate sweeps) can be tested against
code whose correctness is visible by inspection.  Hard size guards keep
them from being called on anything but toy instances.
"""

from __future__ import annotations

from typing import Iterator, Sequence

import numpy as np

from .model import (
    BandScheme,
    NominalProblem,
    Profile,
    Scenario,
    compute_profile,
)

MAX_POSITIONS = 10
MAX_BANDS = 5
MAX_ENUM_VARS = 12


class OracleSizeError(ValueError):
    """Raised when an enumeration oracle is asked to exceed its size guard."""


def _check_size(n: int, num_bands: int) -> None:
    if n > MAX_POSITIONS:
        raise OracleSizeError(f"enumeration limited to {MAX_POSITIONS} positions, got {n}")
    if num_bands > MAX_BANDS:
        raise OracleSizeError(f"enumeration limited to {MAX_BANDS} bands, got {num_bands}")


def assignments_with_counts(
    n: int, bands: Sequence[int], lower: Sequence[int], upper: Sequence[int]
) -> Iterator[tuple[int, ...]]:
    """All maps position -> band with per-band counts inside [lower, upper].

    Yields tuples of band indices, lexicographic in position order with
    bands ascending.  ``lower`` / ``upper`` align with ``bands``.
    """
    nb = len(bands)
    counts = [0] * nb
    assign = [0] * n
    upper = [int(u) for u in upper]
    lower = [int(lo) for lo in lower]

    def rec(pos: int) -> Iterator[tuple[int, ...]]:
        if pos == n:
            yield tuple(assign)
            return
        remaining = n - pos - 1
        for bi in range(nb):
            if counts[bi] == upper[bi]:
                continue
            counts[bi] += 1
            # the positions left must still be able to top every band up
            # to its lower bound
            deficit = sum(max(lower[o] - counts[o], 0) for o in range(nb))
            if deficit <= remaining:
                assign[pos] = bands[bi]
                yield from rec(pos + 1)
            counts[bi] -= 1

    return rec(0)


def enumerate_assignments(
    scheme: BandScheme, n: int, mode: str = "profile", row: int | None = None
) -> list[tuple[int, ...]]:
    """All band assignments of ``n`` positions permitted by the scheme.

    ``mode="bounds"`` admits any assignment whose per-band counts respect
    [l_k, u_k]; ``mode="profile"`` requires the counts to equal the profile
    of the scheme for this ``n`` exactly.  Assignments are tuples of band
    indices, position-major lexicographic with bands ascending.
    """
    _check_size(n, scheme.num_bands)
    bands = list(scheme.bands)
    lo, up = scheme.bounds_for_row(row)
    if mode == "bounds":
        return list(assignments_with_counts(n, bands, lo.tolist(), up.tolist()))
    if mode == "profile":
        prof = compute_profile(scheme, n, row=row)
        theta = [prof.theta[k] for k in bands]
        return list(assignments_with_counts(n, bands, theta, theta))
    raise ValueError(f"mode must be 'bounds' or 'profile', got {mode!r}")


def dev_bruteforce(
    x: np.ndarray, i: int, scheme: BandScheme, mode: str = "profile"
) -> float:
    """Worst-case extra load of row ``i`` at ``x`` by plain enumeration.

    Maximizes ``sum_j d_ij^{k(j)} x_j`` over all admissible assignments of
    the row's uncertain columns to bands (certain columns never deviate).
    ``mode`` selects the admissible set as in :func:`enumerate_assignments`.
    """
    x = np.asarray(x, dtype=float)
    cols = scheme.uncertain_cols(i)
    if not cols:
        return 0.0
    best = -np.inf
    for assign in enumerate_assignments(scheme, len(cols), mode=mode, row=i):
        total = 0.0
        for pos, j in enumerate(cols):
            d = scheme.thresholds(i, j)
            total += d[scheme.index(assign[pos])] * x[j]
        if total > best:
            best = total
    return float(best)


def expand_scenarios(problem: NominalProblem, scheme: BandScheme) -> NominalProblem:
    """Exact robust counterpart by explicit scenario rows.

    Replaces every uncertain row with one inequality per admissible
    band assignment at profile counts (the dominating scenarios for
    ``x >= 0``), keeping certain rows as-is.  Row count is exponential in
    the row size, so this is an oracle for small instances, not a
    reformulation.
    """
    rows, rhs = [], []
    for i in range(problem.m):
        cols = scheme.uncertain_cols(i)
        if not cols:
            rows.append(problem.A[i].copy())
            rhs.append(float(problem.b[i]))
            continue
        for assign in enumerate_assignments(scheme, len(cols), mode="profile", row=i):
            coeffs = problem.A[i].copy()
            for pos, j in enumerate(cols):
                d = scheme.thresholds(i, j)
                coeffs[j] += d[scheme.index(assign[pos])]
            rows.append(coeffs)
            rhs.append(float(problem.b[i]))
    return NominalProblem(
        c=problem.c,
        A=np.array(rows),
        b=np.array(rhs),
        int_vars=problem.int_vars,
        free_vars=problem.free_vars,
    )


def robust_feasible_enum(
    problem: NominalProblem, scheme: BandScheme, x: np.ndarray, tol: float = 1e-9
) -> bool:
    """Whether ``x`` survives the worst admissible deviation of every row."""
    x = np.asarray(x, dtype=float)
    for i in range(problem.m):
        lhs = float(problem.A[i] @ x) + dev_bruteforce(x, i, scheme, mode="profile")
        if lhs > problem.b[i] + tol:
            return False
    return True


def robust_optimum_enum(
    problem: NominalProblem, scheme: BandScheme
) -> tuple[float, np.ndarray] | None:
    """Robust optimum of a pure-binary instance by full 0/1 enumeration.

    Requires every variable integral; the search covers {0, 1}^n, so the
    instance must bound each variable by 1 (e.g. explicit ``x_j <= 1``
    rows).  Returns (value, x) or None when no binary point is robust
    feasible.
    """
    n = problem.n
    if n > MAX_ENUM_VARS:
        raise OracleSizeError(f"binary enumeration limited to {MAX_ENUM_VARS} variables")
    if problem.int_vars != frozenset(range(n)):
        raise ValueError("robust_optimum_enum requires all variables integral")
    best = None
    for mask in range(2 ** n):
        x = np.array([(mask >> j) & 1 for j in range(n)], dtype=float)
        if not robust_feasible_enum(problem, scheme, x):
            continue
        val = float(problem.c @ x)
        if best is None or val > best[0] + 1e-12:
            best = (val, x)
    return best


def lp_bruteforce(
    c: np.ndarray, A: np.ndarray, b: np.ndarray, tol: float = 1e-7
) -> tuple[str, float | None]:
    """LP ``max c'x, A x <= b, x >= 0`` by vertex and ray enumeration.

    Every vertex is the solution of n active constraints drawn from the
    rows of [A; -I]; every extreme recession direction is a vertex of the
    normalized cone {A d <= 0, d >= 0, sum d = 1}.  Returns
    ("infeasible", None), ("unbounded", None), or ("optimal", value).
    Exponential in n + m; use only on toy instances.
    """
    from itertools import combinations

    c = np.asarray(c, dtype=float)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float)
    n = c.shape[0]

    def vertices(rows: np.ndarray, rhs: np.ndarray) -> list[np.ndarray]:
        found = []
        for active in combinations(range(rows.shape[0]), n):
            sub = rows[list(active)]
            try:
                v = np.linalg.solve(sub, rhs[list(active)])
            except np.linalg.LinAlgError:
                continue
            if np.all(rows @ v <= rhs + tol):
                found.append(v)
        return found

    rows = np.vstack([A, -np.eye(n)])
    rhs = np.concatenate([b, np.zeros(n)])
    verts = vertices(rows, rhs)
    if not verts:
        return "infeasible", None

    ones = np.ones((1, n))
    cone_rows = np.vstack([A, -np.eye(n), ones, -ones])
    cone_rhs = np.concatenate([np.zeros(A.shape[0] + n), [1.0, -1.0]])
    for d in vertices(cone_rows, cone_rhs):
        if float(c @ d) > 1e-9:
            return "unbounded", None

    return "optimal", float(max(c @ v for v in verts))


def milp_bruteforce_binary(
    c: np.ndarray, A: np.ndarray, b: np.ndarray, tol: float = 1e-9
) -> tuple[float, np.ndarray] | None:
    """Binary program ``max c'x, A x <= b, x in {0,1}^n`` by enumeration."""
    c = np.asarray(c, dtype=float)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float)
    n = c.shape[0]
    if n > MAX_ENUM_VARS:
        raise OracleSizeError(f"binary enumeration limited to {MAX_ENUM_VARS} variables")
    best = None
    for mask in range(2 ** n):
        x = np.array([(mask >> j) & 1 for j in range(n)], dtype=float)
        if np.any(A @ x > b + tol):
            continue
        val = float(c @ x)
        if best is None or val > best[0] + 1e-12:
            best = (val, x)
    return best


def random_feasible_scenario(
    problem: NominalProblem,
    scheme: BandScheme,
    rng: np.random.Generator,
    interior: bool = True,
) -> Scenario:
    """A random scenario satisfying ranges and band-count bounds.

    Per row, draws band counts within [l_k, u_k] by rejection (falling back
    to the profile counts), assigns shuffled columns to bands, then places
    each deviation at the band's right endpoint or, when ``interior``,
    strictly inside the band's interval.
    """
    dev = np.zeros((problem.m, problem.n))
    bands = list(scheme.bands)
    for i in range(problem.m):
        cols = scheme.uncertain_cols(i)
        if not cols:
            continue
        lo, up = scheme.bounds_for_row(i)
        counts = None
        for _ in range(50):
            trial = [int(rng.integers(lo[bi], up[bi] + 1)) for bi in range(len(bands))]
            if sum(trial) == len(cols):
                counts = trial
                break
        if counts is None:
            prof = compute_profile(scheme, len(cols), row=i)
            counts = [prof.theta[k] for k in bands]
        order = list(cols)
        rng.shuffle(order)
        pos = 0
        for bi, k in enumerate(bands):
            for j in order[pos : pos + counts[bi]]:
                d = scheme.thresholds(i, j)
                hi = d[scheme.index(k)]
                if k == scheme.k_minus or not interior:
                    dev[i, j] = hi
                else:
                    lo_edge = d[scheme.index(k) - 1]
                    frac = rng.uniform(0.05, 0.95)
                    dev[i, j] = lo_edge + frac * (hi - lo_edge)
            pos += counts[bi]
    return Scenario(dev=dev)
