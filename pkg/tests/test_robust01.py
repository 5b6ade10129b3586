"""Robust binary sweep: candidate grids, oracles, loaders, exactness."""

from __future__ import annotations

import numpy as np
import pytest

from multiband.model import InstanceError
from multiband.robust01 import (
    CombinatorialInstance,
    Edge,
    ExplicitSetOracle,
    OracleError,
    ShortestPathOracle,
    SpanningTreeOracle,
    candidate_sets,
    feasible_w,
    load_explicit,
    load_shortest_path,
    load_spanning_tree,
    modified_costs,
    robust_value_bruteforce,
    solve_robust_binary,
)
from conftest import random_combi


@pytest.fixture
def two_edge():
    oracle = ShortestPathOracle(2, [Edge(0, 1), Edge(0, 1)], 0, 1)
    return CombinatorialInstance(
        c=np.array([1.0, 2.0]), d=np.array([[5.0], [0.5]]),
        lower=np.array([0, 0]), upper=np.array([2, 1]), oracle=oracle,
    )


def test_fixture_profile(two_edge):
    assert two_edge.theta == {0: 1, 1: 1}


def test_modified_costs(two_edge):
    assert np.allclose(modified_costs(two_edge, {0: 0, 1: 0}), [6, 2.5])
    assert np.allclose(modified_costs(two_edge, {0: 0, 1: 0.5}), [5.5, 2.0])
    # once w dominates every threshold the nominal costs remain; the theta'w
    # price enters the sweep objective, not the per-item costs
    assert np.allclose(modified_costs(two_edge, {0: 0, 1: 9}), [1, 2])


def test_candidate_sets(two_edge):
    cs = candidate_sets(two_edge)
    assert cs.kept == (0, 1)
    assert np.allclose(cs.pairs[(1, 0)], [0, 0.5, 5])
    assert np.allclose(cs.pairs[(0, 1)], [-5, -0.5, 0])
    assert np.allclose(cs.caps[0], [0])
    assert np.allclose(cs.caps[1], [0, 0.5, 5])
    assert cs.n_combinations == 27


def test_feasible_w():
    assert feasible_w({(1, 0): 0.5, (0, 1): -0.5}, {0: 0.0, 1: 0.5}) == {0: 0.0, 1: 0.5}
    assert feasible_w({}, {0: 0.0}) == {0: 0.0}
    assert feasible_w({(1, 0): 5.0, (0, 1): -5.0}, {0: 0.0, 1: 0.5}) is None


def test_fixture_solve(two_edge):
    res = solve_robust_binary(two_edge, collect=True)
    assert res.value == 2.5
    assert np.allclose(res.x, [0, 1])
    # the candidate w=(0, 0.5) attains the optimum
    assert any(w == {0: 0.0, 1: 0.5} for w, ub in res.evaluated
               if abs(ub - 2.5) < 1e-12)
    # every evaluated point is an upper bound on the optimum
    assert all(ub >= res.value - 1e-12 for _, ub in res.evaluated)
    assert res.nominal_solves <= 3 ** 4
    bf_val, _ = robust_value_bruteforce(two_edge)
    assert res.value == bf_val


def test_certain_instance_single_combination():
    inst = CombinatorialInstance(
        c=np.array([3.0, 1.0]), d=np.zeros((2, 0)), lower=np.array([0]),
        upper=np.array([2]), oracle=ExplicitSetOracle(np.array([[1.0, 0], [0, 1]])),
    )
    res = solve_robust_binary(inst)
    assert res.n_combinations == 1
    assert res.nominal_solves == 1
    assert res.value == 1.0


def test_shortest_path_oracle():
    x, v = ShortestPathOracle(2, [Edge(0, 1)], 0, 1)(np.array([3.0]))
    assert v == 3.0 and x[0] == 1.0
    with pytest.raises(OracleError):
        ShortestPathOracle(3, [Edge(0, 1)], 0, 2)(np.array([1.0]))


def test_spanning_tree_oracle():
    x, v = SpanningTreeOracle(3, [Edge(0, 1), Edge(1, 2), Edge(0, 2)])(
        np.array([1.0, 2.0, 3.0]))
    assert v == 3.0
    assert np.allclose(x, [1, 1, 0])
    with pytest.raises(OracleError):
        SpanningTreeOracle(3, [Edge(0, 1)])(np.array([1.0]))


def test_explicit_oracle():
    x, v = ExplicitSetOracle(np.array([[1.0, 0], [0, 1]]))(np.array([5.5, 2.0]))
    assert v == 2.0
    assert np.allclose(x, [0, 1])


def test_shortest_path_loader_and_sweep():
    tri = load_shortest_path({
        "nodes": 3,
        "edges": [
            {"u": 0, "v": 1, "c": 1, "d": {"1": 2}},
            {"u": 1, "v": 2, "c": 1, "d": {"1": 3}},
            {"u": 0, "v": 2, "c": 3, "d": {"1": 1}},
        ],
        "source": 0, "target": 2,
        "bands": {"l": {"0": 0, "1": 0}, "u": {"1": 1}},
    })
    res = solve_robust_binary(tri)
    assert res.value == robust_value_bruteforce(tri)[0]
    # scaling costs and deviations scales the optimum, same argmin
    lam = 3.0
    scaled = CombinatorialInstance(tri.c * lam, tri.d * lam, tri.lower,
                                   tri.upper, tri.oracle)
    rs = solve_robust_binary(scaled)
    assert rs.value == pytest.approx(lam * res.value, abs=1e-9)
    assert np.allclose(rs.x, res.x)


def test_spanning_tree_loader():
    inst = load_spanning_tree({
        "nodes": 3,
        "edges": [{"u": 0, "v": 1, "c": 1, "d": {"1": 1}},
                  {"u": 1, "v": 2, "c": 2, "d": {"1": 2}},
                  {"u": 0, "v": 2, "c": 3, "d": {"1": 3}}],
        "bands": {"u": {"1": 2}},
    })
    res = solve_robust_binary(inst)
    assert res.value == robust_value_bruteforce(inst)[0]


def test_explicit_loader():
    inst = load_explicit({
        "c": [1, 2], "d": [[5], [0.5]],
        "points": [[1, 0], [0, 1]],
        "bands": {"u": {"1": 1}},
    })
    assert solve_robust_binary(inst).value == 2.5


def test_loader_rejects_out_of_range_band():
    with pytest.raises(InstanceError, match="bands 0..1"):
        load_explicit({
            "c": [1, 2], "d": [[5], [0.5]],
            "points": [[1, 0], [0, 1]],
            "bands": {"u": {"2": 1}},  # ladders only define bands 0..1
        })


def test_loader_requires_full_ladder():
    with pytest.raises(InstanceError, match="every"):
        load_shortest_path({
            "nodes": 2,
            "edges": [{"u": 0, "v": 1, "c": 1, "d": {"2": 2}}],  # band 1 missing
            "source": 0, "target": 1,
            "bands": {"u": {"1": 1, "2": 1}},
        })


def test_alpha_passthrough(two_edge):
    class Approx:
        alpha = 1.5

        def __init__(self, inner):
            self.inner = inner

        def __call__(self, costs):
            return self.inner(costs)

        def enumerate(self):
            return self.inner.enumerate()

    inst = CombinatorialInstance(two_edge.c, two_edge.d, two_edge.lower,
                                 two_edge.upper, Approx(two_edge.oracle))
    assert solve_robust_binary(inst).alpha == 1.5


def test_sweep_equals_bruteforce_random():
    for s in range(30):
        inst = random_combi(5000 + s)
        res = solve_robust_binary(inst, collect=True)
        ref_val, _ = robust_value_bruteforce(inst)
        assert res.value == ref_val
        bound = (inst.n + 1) ** ((inst.k_plus + 1) ** 2)
        assert res.nominal_solves <= bound
        assert all(ub >= res.value for _, ub in res.evaluated)
        assert solve_robust_binary(inst, prune=True).value == res.value
