"""Two-phase simplex and branch & bound against hand cases and scipy."""

from __future__ import annotations

import numpy as np
import pytest
from scipy.optimize import linprog

from multiband.model import NominalProblem
from multiband.oracle import milp_bruteforce_binary
from multiband.simplexmilp import (
    Status,
    VarBound,
    solve_lp,
    solve_milp,
)


def _lp(c, A, b, **kw) -> NominalProblem:
    return NominalProblem(c=np.asarray(c, float), A=A, b=b, **kw)


def test_lp_simple_optimum():
    res = solve_lp(_lp([3.0, 2.0], [[1.0, 1.0], [1.0, 0.0]], [4.0, 2.0]))
    assert res.status is Status.OPTIMAL
    assert res.value == pytest.approx(10.0)  # x = (2, 2)
    assert res.x == pytest.approx([2.0, 2.0])


def test_lp_infeasible():
    res = solve_lp(_lp([1.0], [[1.0], [-1.0]], [1.0, -3.0]))
    assert res.status is Status.INFEASIBLE
    assert res.x is None and res.value is None


def test_lp_unbounded():
    res = solve_lp(_lp([1.0, 0.0], [[0.0, 1.0]], [5.0]))
    assert res.status is Status.UNBOUNDED


def test_lp_degenerate_is_handled():
    # multiple rows active at the optimum vertex
    res = solve_lp(
        _lp([1.0, 1.0], [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]], [1.0, 1.0, 2.0])
    )
    assert res.status is Status.OPTIMAL
    assert res.value == pytest.approx(2.0)


def test_lp_zero_rows():
    assert solve_lp(_lp([1.0], np.zeros((0, 1)), np.zeros(0))).status is Status.UNBOUNDED
    res = solve_lp(_lp([-1.0], np.zeros((0, 1)), np.zeros(0)))
    assert res.status is Status.OPTIMAL and res.value == 0.0


def test_lp_free_variable_goes_negative():
    # minimize x (i.e. max -x) with x >= -4 expressed as -x <= 4
    res = solve_lp(_lp([-1.0], [[-1.0]], [4.0], free_vars={0}))
    assert res.status is Status.OPTIMAL
    assert res.x[0] == pytest.approx(-4.0)
    assert res.value == pytest.approx(4.0)


def test_lp_extra_bounds_tighten():
    prob = _lp([1.0, 1.0], [[1.0, 1.0]], [4.0])
    res = solve_lp(prob, extra_bounds=(VarBound(0, "<=", 1.0),))
    assert res.status is Status.OPTIMAL
    assert res.value == pytest.approx(4.0)
    res = solve_lp(
        prob, extra_bounds=(VarBound(0, "<=", 1.0), VarBound(1, "<=", 1.0))
    )
    assert res.value == pytest.approx(2.0)


def test_lp_matches_scipy_on_random_instances():
    rng = np.random.default_rng(123)
    agree = 0
    for _ in range(120):
        n = int(rng.integers(1, 6))
        m = int(rng.integers(1, 6))
        c = rng.integers(-5, 6, size=n).astype(float)
        A = rng.integers(-5, 6, size=(m, n)).astype(float)
        b = rng.integers(-3, 10, size=m).astype(float)
        mine = solve_lp(_lp(c, A, b))
        ref = linprog(-c, A_ub=A, b_ub=b, bounds=[(0, None)] * n, method="highs")
        # HiGHS presolve may fold "unbounded" into "infeasible", so split the
        # two cases with a zero-objective feasibility probe
        if ref.status == 0:
            assert mine.status is Status.OPTIMAL
            assert mine.value == pytest.approx(-ref.fun, abs=1e-6)
            assert np.all(A @ mine.x <= b + 1e-7)
            assert np.all(mine.x >= -1e-9)
        else:
            probe = linprog(
                np.zeros(n), A_ub=A, b_ub=b, bounds=[(0, None)] * n, method="highs"
            )
            expected = Status.UNBOUNDED if probe.status == 0 else Status.INFEASIBLE
            assert mine.status is expected
        agree += 1
    assert agree == 120


def test_milp_small_knapsack():
    prob = _lp(
        [5.0, 4.0, 3.0],
        np.vstack([[2.0, 3.0, 1.0], np.eye(3)]),
        [3.0, 1, 1, 1],
        int_vars=frozenset(range(3)),
    )
    res = solve_milp(prob)
    assert res.status is Status.OPTIMAL
    assert res.value == pytest.approx(8.0)
    assert np.allclose(np.round(res.x), [1, 0, 1])


def test_milp_matches_enumeration_on_random_binaries():
    rng = np.random.default_rng(321)
    for _ in range(60):
        n = int(rng.integers(1, 6))
        m = int(rng.integers(1, 4))
        c = rng.integers(-4, 8, size=n).astype(float)
        A = rng.integers(-4, 6, size=(m, n)).astype(float)
        b = rng.integers(0, 10, size=m).astype(float)
        prob = _lp(
            c,
            np.vstack([A, np.eye(n)]),
            np.concatenate([b, np.ones(n)]),
            int_vars=frozenset(range(n)),
        )
        res = solve_milp(prob)
        ref = milp_bruteforce_binary(c, np.vstack([A, np.eye(n)]),
                                     np.concatenate([b, np.ones(n)]))
        if ref is None:
            assert res.status is Status.INFEASIBLE
        else:
            assert res.status is Status.OPTIMAL
            assert res.value == pytest.approx(ref[0], abs=1e-6)


def test_milp_respects_node_limit():
    rng = np.random.default_rng(9)
    n = 10
    c = rng.integers(3, 9, size=n).astype(float)
    A = np.vstack([rng.integers(1, 7, size=(1, n)).astype(float), np.eye(n)])
    b = np.concatenate([[A[0].sum() / 2.0 + 0.5], np.ones(n)])
    prob = _lp(c, A, b, int_vars=frozenset(range(n)))
    res = solve_milp(prob, node_limit=2)
    assert res.status is Status.LIMIT


def test_milp_integrality_of_result():
    rng = np.random.default_rng(77)
    for _ in range(20):
        n = int(rng.integers(2, 5))
        prob = _lp(
            rng.integers(1, 9, size=n).astype(float),
            np.vstack([rng.integers(0, 5, size=(2, n)).astype(float), np.eye(n)]),
            np.concatenate([rng.integers(3, 12, size=2).astype(float),
                            rng.integers(1, 4, size=n).astype(float)]),
            int_vars=frozenset(range(n)),
        )
        res = solve_milp(prob)
        assert res.status is Status.OPTIMAL
        frac = np.abs(res.x[: n] - np.round(res.x[: n])).max()
        assert frac <= 1e-6


def test_status_enum_values():
    assert Status.OPTIMAL.value == "optimal"
    assert Status.LIMIT.value == "limit"
