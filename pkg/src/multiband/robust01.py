"""Robust binary programs with banded cost uncertainty.

Minimization problems ``min c'x`` over a combinatorial set X given by a
nominal oracle (shortest path, spanning tree, or an explicit point list),
where each item's cost may rise through positive deviation bands.  The
robust optimum is found exactly by sweeping a finite candidate set of
dual price vectors w: each candidate prices the bands, the oracle solves
the nominal problem under modified costs, and the best combination equals
the robust optimum.  The sweep solves at most ``(n+1)^(|K|^2)`` nominal
problems.

This module is min-form throughout, unlike the max-form core; the CLI
boundary performs any conversion.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field

import numpy as np

from ._kernels import sweep_feasible_w
from .model import BandScheme, InstanceError, compute_profile
from .oracle import dev_bruteforce


class OracleError(RuntimeError):
    """Raised when a nominal oracle has no feasible point to return."""


# ---------------------------------------------------------------------------
# nominal oracles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Edge:
    u: int
    v: int


class ShortestPathOracle:
    """Exact s-t shortest path on a digraph; items are the edges.

    Dijkstra with deterministic tie-breaking (lowest distance first, then
    lowest node; relaxations in edge-index order keep the first of equal
    paths), so identical costs always return the identical incidence
    vector.
    """

    alpha = 1.0

    def __init__(self, n_nodes: int, edges: list[Edge], source: int, target: int):
        self.n_nodes = n_nodes
        self.edges = list(edges)
        self.source = source
        self.target = target
        self._adj: list[list[int]] = [[] for _ in range(n_nodes)]
        for idx, e in enumerate(self.edges):
            self._adj[e.u].append(idx)

    def __call__(self, costs: np.ndarray) -> tuple[np.ndarray, float]:
        costs = np.asarray(costs, dtype=float)
        if np.any(costs < 0):
            raise ValueError("shortest-path costs must be nonnegative")
        dist = np.full(self.n_nodes, np.inf)
        parent_edge = np.full(self.n_nodes, -1, dtype=np.int64)
        dist[self.source] = 0.0
        heap = [(0.0, self.source)]
        done = np.zeros(self.n_nodes, dtype=bool)
        while heap:
            d_u, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            for idx in self._adj[u]:
                v = self.edges[idx].v
                nd = d_u + costs[idx]
                if nd < dist[v]:
                    dist[v] = nd
                    parent_edge[v] = idx
                    heapq.heappush(heap, (nd, v))
        if not np.isfinite(dist[self.target]):
            raise OracleError(
                f"node {self.target} unreachable from {self.source}"
            )
        x = np.zeros(len(self.edges))
        v = self.target
        while v != self.source:
            idx = int(parent_edge[v])
            x[idx] = 1.0
            v = self.edges[idx].u
        return x, float(costs @ x)

    def enumerate(self):
        """All simple source-target paths as incidence vectors."""

        def walk(u, used_nodes, used_edges):
            if u == self.target:
                x = np.zeros(len(self.edges))
                x[list(used_edges)] = 1.0
                yield x
                return
            for idx in self._adj[u]:
                v = self.edges[idx].v
                if v in used_nodes:
                    continue
                yield from walk(u=v, used_nodes=used_nodes | {v},
                                used_edges=used_edges + [idx])

        yield from walk(self.source, {self.source}, [])


class SpanningTreeOracle:
    """Exact minimum spanning tree on an undirected graph; items are edges.

    Kruskal over edges stably sorted by cost (ties keep input order), so
    identical costs return the identical tree.
    """

    alpha = 1.0

    def __init__(self, n_nodes: int, edges: list[Edge]):
        self.n_nodes = n_nodes
        self.edges = list(edges)

    def __call__(self, costs: np.ndarray) -> tuple[np.ndarray, float]:
        costs = np.asarray(costs, dtype=float)
        order = np.argsort(costs, kind="stable")
        parent = list(range(self.n_nodes))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        x = np.zeros(len(self.edges))
        picked = 0
        for idx in order:
            ra, rb = find(self.edges[idx].u), find(self.edges[idx].v)
            if ra == rb:
                continue
            parent[ra] = rb
            x[idx] = 1.0
            picked += 1
        if picked != self.n_nodes - 1:
            raise OracleError("graph is not connected")
        return x, float(costs @ x)

    def enumerate(self):
        """All spanning trees as incidence vectors."""
        m = len(self.edges)
        for subset in itertools.combinations(range(m), self.n_nodes - 1):
            parent = list(range(self.n_nodes))

            def find(a):
                while parent[a] != a:
                    parent[a] = parent[parent[a]]
                    a = parent[a]
                return a

            ok = True
            for idx in subset:
                ra, rb = find(self.edges[idx].u), find(self.edges[idx].v)
                if ra == rb:
                    ok = False
                    break
                parent[ra] = rb
            if ok:
                x = np.zeros(m)
                x[list(subset)] = 1.0
                yield x


class ExplicitSetOracle:
    """Feasible set given outright as a list of 0/1 vectors."""

    alpha = 1.0

    def __init__(self, points: np.ndarray):
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or points.shape[0] == 0:
            raise OracleError("explicit feasible set must be a nonempty 2-D array")
        self.points = points

    def __call__(self, costs: np.ndarray) -> tuple[np.ndarray, float]:
        values = self.points @ np.asarray(costs, dtype=float)
        best = int(np.argmin(values))
        return self.points[best].copy(), float(values[best])

    def enumerate(self):
        for row in self.points:
            yield row.copy()


# ---------------------------------------------------------------------------
# instances
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CombinatorialInstance:
    """``min c'x`` over the oracle's feasible set, costs rising through
    ``k_plus`` positive bands with per-item thresholds ``d[j, k-1]``.

    ``lower``/``upper`` bound how many items a worst case may place in
    each band ``0..k_plus``; ``upper[0]`` must equal n.  ``d`` must be
    strictly increasing and positive along each row (a certain instance
    has ``k_plus = 0`` and an empty ``d``).
    """

    c: np.ndarray
    d: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    oracle: object

    def __post_init__(self) -> None:
        c = np.asarray(self.c, dtype=float)
        d = np.asarray(self.d, dtype=float)
        if d.ndim != 2 or d.shape[0] != c.shape[0]:
            raise InstanceError(f"d must be (n, k_plus), got {d.shape}")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "lower", np.asarray(self.lower, dtype=np.int64))
        object.__setattr__(self, "upper", np.asarray(self.upper, dtype=np.int64))
        if np.any(c < 0):
            raise InstanceError("nominal costs must be nonnegative")
        full = np.hstack([np.zeros((self.n, 1)), d])
        if np.any(np.diff(full, axis=1) <= 0):
            raise InstanceError(
                "thresholds must satisfy 0 < d_j^1 < ... < d_j^K per item"
            )
        if self.lower.shape != (self.k_plus + 1,) or self.upper.shape != (
            self.k_plus + 1,
        ):
            raise InstanceError("band bounds must cover bands 0..k_plus")
        if self.upper[0] != self.n:
            raise InstanceError(f"u_0 must equal n={self.n}, got {self.upper[0]}")
        # shared band machinery: one conceptual row holding every item
        scheme = BandScheme(
            0,
            self.k_plus,
            self.lower,
            self.upper,
            {(0, j): full[j] for j in range(self.n) if self.k_plus > 0},
        )
        object.__setattr__(self, "_scheme", scheme)
        object.__setattr__(self, "_profile", compute_profile(scheme, self.n))

    @property
    def n(self) -> int:
        return self.c.shape[0]

    @property
    def k_plus(self) -> int:
        return self.d.shape[1]

    @property
    def theta(self) -> dict[int, int]:
        return dict(self._profile.theta)

    @property
    def scheme(self) -> BandScheme:
        return self._scheme


def modified_costs(inst: CombinatorialInstance, w: dict[int, float]) -> np.ndarray:
    """Band-priced costs ``c_j + max(0, max_k(d_j^k - w_k))``.

    ``w`` maps band index to price; bands absent from ``w`` are the ones
    dropped for an empty worst-case count and do not enter the max.
    """
    if any(v < 0 for v in w.values()):
        raise ValueError("band prices must be nonnegative")
    out = inst.c.copy()
    if inst.k_plus == 0:
        return out
    gaps = np.zeros(inst.n)
    for k, wk in w.items():
        if k == 0:
            continue
        gaps = np.maximum(gaps, inst.d[:, k - 1] - wk)
    return out + gaps


@dataclass(frozen=True)
class CandidateSets:
    """Value sets of the dual-price sweep over the kept bands.

    ``kept`` lists the bands remaining after dropping every positive band
    whose worst-case count is zero (they price nothing and only widen the
    sweep).  ``pairs[(k, k')]`` bounds ``w_k - w_k' >= value``;
    ``caps[k]`` bounds ``0 <= w_k <= value``.
    """

    kept: tuple[int, ...]
    pairs: dict[tuple[int, int], np.ndarray]
    caps: dict[int, np.ndarray]

    @property
    def n_combinations(self) -> int:
        total = 1
        for vals in self.pairs.values():
            total *= len(vals)
        for vals in self.caps.values():
            total *= len(vals)
        return total


def candidate_sets(inst: CombinatorialInstance) -> CandidateSets:
    """Difference and cap value sets whose sweep covers the optimum."""
    theta = inst.theta
    kept = tuple(
        k for k in range(inst.k_plus + 1) if k == 0 or theta.get(k, 0) > 0
    )
    full = np.hstack([np.zeros((inst.n, 1)), inst.d])

    def col(k: int) -> np.ndarray:
        return full[:, k]

    pairs = {}
    for k, kp in itertools.permutations(kept, 2):
        pairs[(k, kp)] = np.unique(np.append(col(k) - col(kp), 0.0))
    caps = {}
    for k in kept:
        caps[k] = (
            np.array([0.0]) if k == 0 else np.unique(np.append(col(k), 0.0))
        )
    return CandidateSets(kept=kept, pairs=pairs, caps=caps)


def feasible_w(
    bounds: dict[tuple[int, int], float],
    caps: dict[int, float],
) -> dict[int, float] | None:
    """Componentwise-maximal solution of one difference-constraint system
    ``w_k - w_k' >= bounds[(k,k')]``, ``0 <= w_k <= caps[k]``, or None
    when the system is infeasible."""
    kept = sorted(caps)
    pos = {k: i for i, k in enumerate(kept)}
    dims_tail, dims_head, flat, offsets = [], [], [], [0]
    for (k, kp), val in sorted(bounds.items()):
        dims_tail.append(pos[k])
        dims_head.append(pos[kp])
        flat.append(val)
        offsets.append(len(flat))
    for k in kept:
        dims_tail.append(pos[k])
        dims_head.append(-1)
        flat.append(caps[k])
        offsets.append(len(flat))
    ws, _, n_feasible = sweep_feasible_w(
        np.asarray(flat, dtype=float),
        np.asarray(offsets, dtype=np.int64),
        np.asarray(dims_tail, dtype=np.int64),
        np.asarray(dims_head, dtype=np.int64),
        len(kept),
    )
    if n_feasible == 0:
        return None
    return {k: ws[0][pos[k]] for k in kept}


@dataclass(frozen=True)
class RobustBinaryResult:
    """Outcome of the candidate sweep.

    ``nominal_solves`` counts oracle invocations (distinct price vectors,
    minus any skipped by pruning); ``n_combinations``/``n_feasible`` count
    swept and feasible systems.  ``alpha`` > 1 marks the value as an
    approximation inherited from the oracle's own guarantee.
    """

    x: np.ndarray
    value: float
    w: dict[int, float]
    nominal_solves: int
    n_combinations: int
    n_feasible: int
    kept_bands: tuple[int, ...]
    alpha: float = 1.0
    evaluated: list[tuple[dict[int, float], float]] | None = field(
        default=None, repr=False
    )


def solve_robust_binary(
    inst: CombinatorialInstance,
    *,
    prune: bool = False,
    collect: bool = False,
) -> RobustBinaryResult:
    """Exact robust optimum by the dual-price sweep.

    Enumerates every combination of candidate values (lexicographic over
    ordered band pairs then caps, values ascending), solves each
    difference-constraint system for its maximal price vector, and calls
    the nominal oracle once per distinct feasible vector.  The best
    ``theta'w + nominal(c̄(w))`` over the sweep is the robust optimum.

    ``prune`` skips oracle calls whose ``theta'w`` alone already matches
    or exceeds the incumbent — safe because modified costs stay
    nonnegative — without affecting the returned value.  ``collect``
    returns every evaluated candidate and its objective.
    """
    sets = candidate_sets(inst)
    kept = sets.kept
    pos = {k: i for i, k in enumerate(kept)}
    theta = inst.theta

    dims_tail, dims_head, flat, offsets = [], [], [], [0]
    for (k, kp) in sorted(sets.pairs):
        dims_tail.append(pos[k])
        dims_head.append(pos[kp])
        flat.extend(sets.pairs[(k, kp)].tolist())
        offsets.append(len(flat))
    for k in kept:
        dims_tail.append(pos[k])
        dims_head.append(-1)
        flat.extend(sets.caps[k].tolist())
        offsets.append(len(flat))

    ws, n_combos, n_feasible = sweep_feasible_w(
        np.asarray(flat, dtype=float),
        np.asarray(offsets, dtype=np.int64),
        np.asarray(dims_tail, dtype=np.int64),
        np.asarray(dims_head, dtype=np.int64),
        len(kept),
    )

    alpha = float(getattr(inst.oracle, "alpha", 1.0))
    best = None
    solves = 0
    evaluated: list[tuple[dict[int, float], float]] = []
    for w_tuple in ws:
        w = {k: w_tuple[pos[k]] for k in kept}
        price = 0.0
        for k in kept:
            price += theta.get(k, 0) * w[k]
        if prune and best is not None and price >= best[0]:
            continue
        x, nominal = inst.oracle(modified_costs(inst, w))
        solves += 1
        total = price + nominal
        if collect:
            evaluated.append((w, total))
        if best is None or total < best[0]:
            best = (total, x, w)
    if best is None:
        raise RuntimeError("sweep found no feasible price system")  # unreachable
    return RobustBinaryResult(
        x=best[1],
        value=float(best[0]),
        w=best[2],
        nominal_solves=solves,
        n_combinations=n_combos,
        n_feasible=n_feasible,
        kept_bands=kept,
        alpha=alpha,
        evaluated=evaluated if collect else None,
    )


def robust_value_bruteforce(
    inst: CombinatorialInstance,
) -> tuple[float, np.ndarray]:
    """Robust optimum by enumerating the feasible set outright.

    For each feasible point the worst case is the exhaustive
    band-assignment maximum; the minimum over points is exact.  Needs an
    oracle that can enumerate its feasible set; intended as the reference
    for small instances.
    """
    best = None
    for x in inst.oracle.enumerate():
        value = float(inst.c @ x)
        if inst.k_plus > 0:
            value += dev_bruteforce(x, 0, inst.scheme)
        if best is None or value < best[0]:
            best = (value, x)
    if best is None:
        raise OracleError("feasible set is empty")
    return best


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------


def _edges_from_json(data) -> tuple[int, list[Edge], np.ndarray, np.ndarray, int]:
    try:
        n_nodes = int(data["nodes"])
        raw_edges = data["edges"]
    except KeyError as exc:
        raise InstanceError(f"missing required field {exc.args[0]!r}") from None
    edges, costs, devs = [], [], []
    k_plus = 0
    for e in raw_edges:
        d_map = {int(k): float(v) for k, v in e.get("d", {}).items()}
        if d_map:
            k_plus = max(k_plus, max(d_map))
    for e in raw_edges:
        try:
            edges.append(Edge(int(e["u"]), int(e["v"])))
            costs.append(float(e["c"]))
        except KeyError as exc:
            raise InstanceError(
                f"edge missing required field {exc.args[0]!r}"
            ) from None
        d_map = {int(k): float(v) for k, v in e.get("d", {}).items()}
        if k_plus and set(d_map) != set(range(1, k_plus + 1)):
            raise InstanceError(
                f"edge ({e['u']},{e['v']}) must list thresholds for every "
                f"band 1..{k_plus}"
            )
        devs.append([d_map[k] for k in range(1, k_plus + 1)])
    return n_nodes, edges, np.asarray(costs, float), np.asarray(devs, float).reshape(
        len(edges), k_plus
    ), k_plus


def _band_bounds_from_json(data, n: int, k_plus: int):
    block = data.get("bands")
    if block is None:
        if k_plus > 0:
            raise InstanceError(
                "instances with deviation bands need a 'bands' block with l/u"
            )
        return np.zeros(1, dtype=np.int64), np.array([n], dtype=np.int64)
    lower = np.zeros(k_plus + 1, dtype=np.int64)
    upper = np.full(k_plus + 1, n, dtype=np.int64)
    for side, target in (("l", lower), ("u", upper)):
        for k_str, v in block.get(side, {}).items():
            k = int(k_str)
            if not 0 <= k <= k_plus:
                raise InstanceError(
                    f"band bound '{side}' names band {k}, but the threshold "
                    f"ladders only define bands 0..{k_plus}"
                )
            target[k] = int(v)
    upper[0] = n
    return lower, upper


def load_shortest_path(data) -> CombinatorialInstance:
    """Digraph JSON {"nodes", "edges": [{"u","v","c","d"}], "source",
    "target", "bands": {"l", "u"}} (the bands block bounds the worst-case
    band counts)."""
    n_nodes, edges, costs, devs, k_plus = _edges_from_json(data)
    try:
        source, target = int(data["source"]), int(data["target"])
    except KeyError as exc:
        raise InstanceError(f"missing required field {exc.args[0]!r}") from None
    lower, upper = _band_bounds_from_json(data, len(edges), k_plus)
    oracle = ShortestPathOracle(n_nodes, edges, source, target)
    return CombinatorialInstance(costs, devs, lower, upper, oracle)


def load_spanning_tree(data) -> CombinatorialInstance:
    """Undirected-graph JSON: as shortest path minus source/target."""
    n_nodes, edges, costs, devs, k_plus = _edges_from_json(data)
    lower, upper = _band_bounds_from_json(data, len(edges), k_plus)
    oracle = SpanningTreeOracle(n_nodes, edges)
    return CombinatorialInstance(costs, devs, lower, upper, oracle)


def load_explicit(data) -> CombinatorialInstance:
    """Explicit-set JSON {"c", "d": [[per-item thresholds]], "points":
    [[0/1 ...]], "bands": {"l", "u"}}."""
    try:
        costs = np.asarray(data["c"], dtype=float)
        points = np.asarray(data["points"], dtype=float)
    except KeyError as exc:
        raise InstanceError(f"missing required field {exc.args[0]!r}") from None
    devs = np.asarray(data.get("d", []), dtype=float)
    if devs.size == 0:
        devs = np.zeros((costs.shape[0], 0))
    if points.ndim != 2 or points.shape[1] != costs.shape[0]:
        raise InstanceError("points must be a list of length-n 0/1 vectors")
    lower, upper = _band_bounds_from_json(data, costs.shape[0], devs.shape[1])
    return CombinatorialInstance(
        costs, devs, lower, upper, ExplicitSetOracle(points)
    )
