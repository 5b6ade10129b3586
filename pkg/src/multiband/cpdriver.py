"""Cutting-plane solver: master problem plus flow-separated robustness cuts.

Starts from the nominal problem, checks the master optimum for worst-case
feasibility row by row, and adds one violated inequality per failing row
until every row is robust.  Masters are re-solved from scratch each
iteration — correctness over speed at the scales this package targets.

Finite termination: every cut realizes a distinct profile-count scenario
of one row, of which there are finitely many, and a cut enters the master
only when violated by more than the check tolerance while masters satisfy
their rows to a strictly tighter tolerance — so no cut can be generated
twice.  A duplicate therefore signals numerical trouble and stops the run
with status ``limit`` rather than looping.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .flowsep import CHECK_TOL, Cut, build_flow_instance, check_robust, extract_cut, min_cost_flow
from .model import BandScheme, NominalProblem
from .simplexmilp import DEFAULT_NODE_LIMIT, Status, solve_lp, solve_milp

DEFAULT_ITER_LIMIT = 10_000


@dataclass(frozen=True)
class CutRecord:
    """One accepted cut and the master point that produced it."""

    iteration: int
    x_master: np.ndarray
    cut: Cut


@dataclass(frozen=True)
class CutsResult:
    """Outcome of a cutting-plane run.

    ``log`` holds one dict per iteration: iteration number, master
    objective, largest row violation at the master point, and the number
    of cuts accepted.  ``cuts`` lists every accepted cut in order.
    """

    status: Status
    x: np.ndarray | None
    value: float | None
    iterations: int
    cuts_added: int
    log: list[dict] = field(repr=False)
    cuts: list[CutRecord] = field(repr=False)


def _cut_key(row: int, coeffs: np.ndarray, rhs: float) -> tuple:
    return (row, np.round(coeffs, 9).tobytes(), round(rhs, 9))


def solve_by_cuts(
    problem: NominalProblem,
    scheme: BandScheme,
    *,
    max_iterations: int = DEFAULT_ITER_LIMIT,
    tol: float = CHECK_TOL,
    node_limit: int = DEFAULT_NODE_LIMIT,
) -> CutsResult:
    """Solve the robust program by iterated separation.

    The master is an LP, or a MILP when the instance declares integer
    variables.  Each iteration adds the cut of *every* violated row (not
    just the worst), deduplicated on coefficients rounded to 1e-9.
    Returns status ``infeasible`` when a master has no solution (robust
    infeasibility), ``unbounded`` when a master is unbounded — bound the
    variables explicitly if the nominal problem needs it — and ``limit``
    when the iteration cap, the node cap, or a duplicate cut stops the
    run early.
    """
    is_milp = bool(problem.int_vars)
    # Masters carry only the certain rows: an uncertain row is represented
    # solely by its cuts.  Its nominal form is not implied by the robust
    # row when lower band bounds force downward deviations, so keeping it
    # could wrongly tighten the master.
    certain = [i for i in range(problem.m) if not scheme.uncertain_cols(i)]
    base_A = problem.A[certain]
    base_b = problem.b[certain]
    cut_rows: list[np.ndarray] = []
    cut_rhs: list[float] = []
    seen: set[tuple] = set()
    records: list[CutRecord] = []
    log: list[dict] = []

    x = None
    value = None
    for it in range(1, max_iterations + 1):
        master = NominalProblem(
            c=problem.c,
            A=np.vstack([base_A, *cut_rows]) if cut_rows else base_A,
            b=np.concatenate([base_b, np.asarray(cut_rhs)]) if cut_rows else base_b,
            int_vars=problem.int_vars,
            free_vars=problem.free_vars,
        )
        res = solve_milp(master, node_limit=node_limit) if is_milp else solve_lp(master)
        if res.status is not Status.OPTIMAL:
            return CutsResult(res.status, None, None, it, len(records), log, records)
        x = res.x
        value = float(res.value)

        checks = check_robust(problem, scheme, x, tol=tol)
        violated = [r for r in checks if not r.robust]
        max_violation = max(0.0, max((-r.slack for r in checks), default=0.0))

        new_cuts = 0
        for rec in violated:
            net = build_flow_instance(problem, scheme, x, rec.row)
            flow, _ = min_cost_flow(net)
            cut = extract_cut(problem, scheme, x, rec.row, flow, tol=tol)
            key = _cut_key(cut.row, cut.coeffs, cut.rhs)
            if key in seen:
                continue
            seen.add(key)
            cut_rows.append(cut.coeffs)
            cut_rhs.append(cut.rhs)
            records.append(CutRecord(iteration=it, x_master=x.copy(), cut=cut))
            new_cuts += 1

        log.append(
            {
                "iteration": it,
                "objective": value,
                "max_violation": float(max_violation),
                "new_cuts": new_cuts,
            }
        )
        if not violated:
            return CutsResult(Status.OPTIMAL, x, value, it, len(records), log, records)
        if new_cuts == 0:
            # violations persist but every candidate cut is already present
            return CutsResult(Status.LIMIT, x, value, it, len(records), log, records)

    return CutsResult(Status.LIMIT, x, value, max_iterations, len(records), log, records)
