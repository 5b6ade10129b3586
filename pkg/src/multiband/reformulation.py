"""Compact robust counterpart and uncertainty liftings.

The robust constraint ``max_S (a_i + d_i^S)'x <= b_i`` dualizes, band by
band, into a polynomial-size extended program: per uncertain row, free
variables ``w_i^k`` (one per band) price the band-count budget and
nonnegative ``z_ij`` (one per uncertain coefficient) price the one-band-
per-coefficient rule.  The extended program is an ordinary MILP solvable
by any solver.

Also provided: the row-level deviation assignment LP whose relaxation is
integral (its constraint matrix is the incidence structure of a bipartite
graph), and liftings that fold rhs- or cost-uncertainty into constraint
uncertainty by adding one variable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (
    BandScheme,
    Instance,
    InstanceError,
    NominalProblem,
    Profile,
    compute_profile,
)


@dataclass(frozen=True)
class VarMap:
    """Column layout of the extended program.

    ``x`` columns come first (0..n-1), then per uncertain row its ``w``
    block, then its ``z`` block.
    """

    n: int
    w: dict[tuple[int, int], int]  # (row, band) -> column
    z: dict[tuple[int, int], int]  # (row, col)  -> column

    @property
    def total(self) -> int:
        return self.n + len(self.w) + len(self.z)


@dataclass(frozen=True)
class CompactCounterpart:
    """Extended program plus bookkeeping to read solutions back."""

    problem: NominalProblem
    var_map: VarMap
    profiles: dict[int, Profile]

    def original_x(self, x_ext: np.ndarray) -> np.ndarray:
        return np.asarray(x_ext, dtype=float)[: self.var_map.n]


def build_compact(problem: NominalProblem, scheme: BandScheme) -> CompactCounterpart:
    """Extended MILP whose optimum equals the robust optimum.

    Per row ``i`` with uncertain columns ``U_i`` (certain rows pass through
    unchanged, certain coefficients get no dual machinery):

        sum_j a_ij x_j + sum_k theta^i_k w_i^k + sum_{j in U_i} z_ij <= b_i
        w_i^k + z_ij >= d_ij^k x_j       for all j in U_i, k in K

    with ``w`` free, ``z >= 0`` and the row profile ``theta^i`` computed
    over ``|U_i|`` uncertain coefficients.  On fully uncertain instances
    this is exactly n + |K|m + nm variables and m + |K|nm constraints.
    """
    n, m = problem.n, problem.m
    bands = list(scheme.bands)
    uncertain = {i: scheme.uncertain_cols(i) for i in range(m)}
    profiles = {
        i: compute_profile(scheme, len(cols), row=i)
        for i, cols in uncertain.items()
        if cols
    }

    w_cols: dict[tuple[int, int], int] = {}
    z_cols: dict[tuple[int, int], int] = {}
    col = n
    for i in range(m):
        if not uncertain[i]:
            continue
        for k in bands:
            w_cols[(i, k)] = col
            col += 1
        for j in uncertain[i]:
            z_cols[(i, j)] = col
            col += 1
    total = col

    n_link = sum(len(cols) * len(bands) for cols in uncertain.values())
    A = np.zeros((m + n_link, total))
    b = np.zeros(m + n_link)
    A[:m, :n] = problem.A
    b[:m] = problem.b
    for i in range(m):
        if not uncertain[i]:
            continue
        theta = profiles[i].theta
        for k in bands:
            A[i, w_cols[(i, k)]] = theta[k]
        for j in uncertain[i]:
            A[i, z_cols[(i, j)]] = 1.0

    row = m
    for i in range(m):
        for j in uncertain[i]:
            d = scheme.thresholds(i, j)
            for k in bands:
                # w_i^k + z_ij >= d_ij^k x_j, stored in <= form
                A[row, j] = d[scheme.index(k)]
                A[row, w_cols[(i, k)]] = -1.0
                A[row, z_cols[(i, j)]] = -1.0
                row += 1

    c = np.zeros(total)
    c[:n] = problem.c
    extended = NominalProblem(
        c=c,
        A=A,
        b=b,
        int_vars=problem.int_vars,
        free_vars=problem.free_vars | frozenset(w_cols.values()),
    )
    var_map = VarMap(n=n, w=dict(w_cols), z=dict(z_cols))
    return CompactCounterpart(problem=extended, var_map=var_map, profiles=profiles)


@dataclass(frozen=True)
class AssignmentLP:
    """Row-level deviation assignment LP in <=-form, plus its layout."""

    problem: NominalProblem
    cols: list[int]  # uncertain columns of the source row, ascending
    bands: list[int]

    def y_value(self, x_lp: np.ndarray, j: int, k: int) -> float:
        pos = self.cols.index(j)
        return float(x_lp[pos * len(self.bands) + self.bands.index(k)])


def build_assignment_lp(
    problem: NominalProblem, scheme: BandScheme, x: np.ndarray, i: int
) -> AssignmentLP:
    """LP relaxation of the row deviation assignment program.

    Maximizes ``sum_{j,k} d_ij^k x_j y_jk`` subject to each band k taking
    exactly ``theta_k`` coefficients and each uncertain coefficient taking
    at most one band.  Equalities are emitted as inequality pairs, which
    preserves the feasible region and hence the vertex set; the region's
    integrality makes every optimal basic solution 0/1.
    """
    x = np.asarray(x, dtype=float)
    cols = scheme.uncertain_cols(i)
    if not cols:
        raise InstanceError(f"row {i} has no uncertain coefficients")
    bands = list(scheme.bands)
    nb = len(bands)
    prof = compute_profile(scheme, len(cols), row=i)
    ny = len(cols) * nb
    c = np.empty(ny)
    for pos, j in enumerate(cols):
        d = scheme.thresholds(i, j)
        for bi, k in enumerate(bands):
            c[pos * nb + bi] = d[scheme.index(k)] * x[j]
    A = np.zeros((2 * nb + len(cols), ny))
    b = np.zeros(2 * nb + len(cols))
    for bi, k in enumerate(bands):
        for pos in range(len(cols)):
            A[2 * bi, pos * nb + bi] = 1.0
            A[2 * bi + 1, pos * nb + bi] = -1.0
        b[2 * bi] = prof.theta[k]
        b[2 * bi + 1] = -prof.theta[k]
    for pos in range(len(cols)):
        A[2 * nb + pos, pos * nb : (pos + 1) * nb] = 1.0
        b[2 * nb + pos] = 1.0
    return AssignmentLP(
        problem=NominalProblem(c=c, A=A, b=b), cols=cols, bands=bands
    )


def _bump_u0(scheme: BandScheme, new_n: int) -> tuple[np.ndarray, dict]:
    """Upper bounds and row overrides with u_0 raised to a new n."""
    upper = scheme.upper.copy()
    upper[scheme.index(0)] = new_n
    row_bounds = {}
    for i, (lo, up) in scheme.row_bounds.items():
        up = up.copy()
        up[scheme.index(0)] = new_n
        row_bounds[i] = (lo.copy(), up)
    return upper, row_bounds


def lift_rhs_uncertainty(
    problem: NominalProblem,
    scheme: BandScheme,
    b_dev: dict[int, dict[int, float]],
) -> tuple[NominalProblem, BandScheme]:
    """Fold rhs uncertainty into the constraint matrix.

    ``b_dev[i]`` gives row i's rhs deviation thresholds (band -> value,
    bands of the *scheme*, 0 implicit).  A new variable ``x_{n}`` is pinned
    to 1 by an inequality pair, ``-b_i`` moves into column n with its
    deviation thresholds negated and mirrored across zero (a +delta on b
    is a -delta on the constraint body), and the rhs becomes 0 on lifted
    rows.  The new column participates in band counting like any other
    coefficient, so schemes whose band index set cannot host a mirrored
    threshold vector are rejected.
    """
    n, m = problem.n, problem.m
    need_minus = max((max(dv) for dv in b_dev.values() if dv), default=0)
    need_plus = -min((min(dv) for dv in b_dev.values() if dv), default=0)
    if b_dev and (need_minus > -scheme.k_minus or need_plus > scheme.k_plus):
        raise InstanceError(
            "rhs deviation bands do not fit the scheme's band range when "
            f"mirrored (need K_minus <= {-need_minus}, K_plus >= {need_plus})"
        )

    A = np.zeros((m + 2, n + 1))
    A[:m, :n] = problem.A
    b = np.concatenate([problem.b, [1.0, -1.0]])
    A[m, n] = 1.0
    A[m + 1, n] = -1.0
    dev = {key: d.copy() for key, d in scheme.dev.items()}
    for i, dv in b_dev.items():
        A[i, n] = -problem.b[i]
        b[i] = 0.0
        vec = np.zeros(scheme.num_bands)
        for k, delta in dv.items():
            if k == 0:
                raise InstanceError("rhs deviation must not list band 0")
            vec[scheme.index(-k)] = -float(delta)
        # fill unset bands monotonically between the mirrored thresholds
        _monotone_fill(vec, scheme.index(0))
        dev[(i, n)] = vec

    c = np.concatenate([problem.c, [0.0]])
    lifted = NominalProblem(
        c=c, A=A, b=b, int_vars=problem.int_vars, free_vars=problem.free_vars
    )
    upper, row_bounds = _bump_u0(scheme, n + 1)
    lifted_scheme = BandScheme(
        k_minus=scheme.k_minus,
        k_plus=scheme.k_plus,
        lower=scheme.lower,
        upper=upper,
        dev=dev,
        row_bounds=row_bounds,
    )
    return lifted, lifted_scheme


def _monotone_fill(vec: np.ndarray, zero_pos: int) -> None:
    """Replace zero placeholders so the vector is strictly increasing."""
    for t in range(zero_pos - 1, -1, -1):
        if vec[t] == 0.0 or vec[t] >= vec[t + 1]:
            vec[t] = vec[t + 1] - 1e-6
    for t in range(zero_pos + 1, len(vec)):
        if vec[t] == 0.0 or vec[t] <= vec[t - 1]:
            vec[t] = vec[t - 1] + 1e-6


def lift_cost_uncertainty(
    problem: NominalProblem,
    scheme: BandScheme,
    c_dev: dict[int, dict[int, float]],
) -> tuple[NominalProblem, BandScheme]:
    """Fold cost uncertainty into one uncertain constraint row.

    Adds an epigraph variable ``L`` and the row ``L - c'x <= 0`` carrying
    the negated cost deviations (a -delta on a max-form cost is a +delta
    on the row), then maximizes ``L``.  Exact whenever the optimal ``L``
    is nonnegative (``L`` enters as an ordinary nonnegative variable);
    shift costs beforehand if the robust optimum can be negative.

    ``c_dev[j]`` maps bands to cost deviation thresholds of variable j.
    """
    n, m = problem.n, problem.m
    need_minus = max((max(dv) for dv in c_dev.values() if dv), default=0)
    need_plus = -min((min(dv) for dv in c_dev.values() if dv), default=0)
    if c_dev and (need_minus > -scheme.k_minus or need_plus > scheme.k_plus):
        raise InstanceError(
            "cost deviation bands do not fit the scheme's band range when "
            f"mirrored (need K_minus <= {-need_minus}, K_plus >= {need_plus})"
        )

    A = np.zeros((m + 1, n + 1))
    A[:m, :n] = problem.A
    b = np.concatenate([problem.b, [0.0]])
    A[m, :n] = -problem.c
    A[m, n] = 1.0
    dev = {key: d.copy() for key, d in scheme.dev.items()}
    for j, dv in c_dev.items():
        vec = np.zeros(scheme.num_bands)
        for k, delta in dv.items():
            if k == 0:
                raise InstanceError("cost deviation must not list band 0")
            vec[scheme.index(-k)] = -float(delta)
        _monotone_fill(vec, scheme.index(0))
        dev[(m, j)] = vec

    c = np.zeros(n + 1)
    c[n] = 1.0
    lifted = NominalProblem(
        c=c, A=A, b=b, int_vars=problem.int_vars, free_vars=problem.free_vars
    )
    upper, row_bounds = _bump_u0(scheme, n + 1)
    lifted_scheme = BandScheme(
        k_minus=scheme.k_minus,
        k_plus=scheme.k_plus,
        lower=scheme.lower,
        upper=upper,
        dev=dev,
        row_bounds=row_bounds,
    )
    return lifted, lifted_scheme


def export_compact(inst: Instance) -> dict:
    """Compact counterpart as an instance JSON object (certain, max-form)."""
    from .model import dump_instance

    compact = build_compact(inst.problem, inst.scheme)
    certain = BandScheme(
        k_minus=0,
        k_plus=0,
        lower=np.zeros(1, dtype=int),
        upper=np.array([compact.problem.n], dtype=int),
    )
    return dump_instance(Instance(problem=compact.problem, scheme=certain))
