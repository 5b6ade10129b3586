"""Shared fixtures and the random-case generators used across the suite."""

from __future__ import annotations

import numpy as np
import pytest

from multiband.model import (
    BandScheme,
    InstanceError,
    NominalProblem,
    ProfileError,
    compute_profile,
)
from multiband.robust01 import (
    CombinatorialInstance,
    Edge,
    ExplicitSetOracle,
    ShortestPathOracle,
    SpanningTreeOracle,
)


@pytest.fixture
def fix_scheme() -> BandScheme:
    """Three uncertain coefficients, bands {0,1,2}, u=(3,2,1): theta=(0,2,1)."""
    return BandScheme(
        k_minus=0,
        k_plus=2,
        lower=np.array([0, 0, 0]),
        upper=np.array([3, 2, 1]),
        dev={
            (0, j): np.array([0.0, d1, d2])
            for j, (d1, d2) in enumerate([(4, 6), (2, 5), (1, 2)])
        },
    )


@pytest.fixture
def fix_problem() -> NominalProblem:
    """One row: x1 + x2 + x3 <= 8, maximize the sum."""
    return NominalProblem(c=np.ones(3), A=np.ones((1, 3)), b=np.array([8.0]))


def random_single_row(rng: np.random.Generator, n_max: int = 6, kp_max: int = 2):
    """A one-row problem with random ladders, or None when bounds misfit.

    Bands span a random window [k_minus, k_plus] with k_minus in {-2..0} and
    at most ``kp_max`` positive bands (so |K| <= kp_max - (-2) + 1); a few
    columns stay certain.  Used by the flow-vs-oracle and dominance suites.
    """
    n = int(rng.integers(1, n_max + 1))
    km = int(rng.integers(-2, 1))
    kp = int(rng.integers(0 if km < 0 else 1, kp_max + 1))
    if km == 0 and kp == 0:
        kp = 1
    nb = kp - km + 1
    dev = {}
    for j in range(n):
        if rng.random() < 0.15:
            continue
        neg = -np.sort(rng.uniform(0.2, 5.0, size=-km))[::-1] if km else []
        pos = np.sort(rng.uniform(0.2, 5.0, size=kp))
        dev[(0, j)] = np.concatenate([np.sort(neg), [0.0], pos])
    lo = np.zeros(nb, dtype=int)
    n_unc = len({j for (_, j) in dev})
    scheme = None
    for _ in range(20):
        up = rng.integers(0, n + 1, size=nb)
        up[-km] = n
        try:
            trial = BandScheme(km, kp, lo, up, dev)
            compute_profile(trial, n_unc)
        except (InstanceError, ProfileError):
            continue
        scheme = trial
        break
    if scheme is None:
        return None
    problem = NominalProblem(
        c=np.zeros(n), A=rng.uniform(0.0, 1.0, (1, n)), b=np.array([1.0])
    )
    return problem, scheme


def random_combi(seed: int) -> CombinatorialInstance:
    """A random robust binary instance over one of the three oracle kinds.

    Graphs stay at <= 6 nodes and item ladders are drawn from a pool of two
    so the candidate sweep stays desk-sized.
    """
    r = np.random.default_rng(seed)
    kind = seed % 3
    if kind == 0:  # shortest path
        nn = int(r.integers(3, 7))
        edges = [Edge(i, i + 1) for i in range(nn - 1)]
        for _ in range(int(r.integers(1, 5))):
            u = int(r.integers(0, nn - 1))
            v = int(r.integers(u + 1, nn))
            edges.append(Edge(u, v))
        oracle = ShortestPathOracle(nn, edges, 0, nn - 1)
    elif kind == 1:  # spanning tree
        nn = int(r.integers(3, 6))
        edges = [Edge(i, i + 1) for i in range(nn - 1)]
        for _ in range(int(r.integers(1, 4))):
            u = int(r.integers(0, nn))
            v = int(r.integers(0, nn))
            if u != v:
                edges.append(Edge(min(u, v), max(u, v)))
        oracle = SpanningTreeOracle(nn, edges)
    else:  # explicit point set
        n_items = int(r.integers(2, 6))
        pts = r.integers(0, 2, size=(int(r.integers(1, 21)), n_items))
        oracle = ExplicitSetOracle(pts.astype(float))
    n = len(oracle.edges) if hasattr(oracle, "edges") else oracle.points.shape[1]
    kp = int(r.integers(0, 4))
    pool = np.cumsum(r.integers(1, 4, size=(2, kp)), axis=1).astype(float)
    d = pool[r.integers(0, 2, size=n)] if kp else np.zeros((n, 0))
    c = r.integers(0, 10, size=n).astype(float)
    lower = np.zeros(kp + 1, dtype=int)
    upper = np.concatenate([[n], r.integers(0, n + 1, size=kp)]).astype(int)
    if kp and r.random() < 0.3:
        lower[int(r.integers(1, kp + 1))] = 1
        upper = np.maximum(upper, lower)
    return CombinatorialInstance(c, d, lower, upper, oracle)
