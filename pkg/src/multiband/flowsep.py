"""Robustness checking and cut extraction via min-cost flow.

A row's worst-case deviation at a point x is an assignment problem: send
one unit of flow per uncertain coefficient through its band of choice,
with band k accepting exactly theta_k units.  The network has a source,
one node per uncertain column, one node per band, and a sink; choosing
band k for column j costs ``-d_ij^k x_j``, so the minimum-cost flow value
is the negated maximum deviation.  An optimal integral flow simultaneously
yields the worst-case scenario and a violated inequality (the cut) when
the row fails.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from .model import (
    BandScheme,
    NominalProblem,
    Profile,
    Scenario,
    compute_profile,
)

CHECK_TOL = 1e-6


class FlowError(RuntimeError):
    """Raised when a hand-built network admits no flow of the required value."""


@dataclass(frozen=True)
class FlowNet:
    """The per-row separation network.

    Node ids: source 0, column nodes 1..len(cols), band nodes next (in
    ascending band order), sink last.  ``arcs`` lists (tail, head,
    capacity, unit_cost) in construction order: source arcs, assignment
    arcs (column-major, bands ascending), band-to-sink arcs.
    """

    row: int
    cols: tuple[int, ...]
    bands: tuple[int, ...]
    theta: dict[int, int]
    arcs: tuple[tuple[int, int, int, float], ...]
    value: int

    @property
    def n_nodes(self) -> int:
        return len(self.cols) + len(self.bands) + 2

    @property
    def source(self) -> int:
        return 0

    @property
    def sink(self) -> int:
        return self.n_nodes - 1

    def col_node(self, pos: int) -> int:
        return 1 + pos

    def band_node(self, band_pos: int) -> int:
        return 1 + len(self.cols) + band_pos

    def assignment(self, flow: dict[tuple[int, int], int]) -> dict[int, int]:
        """Map column j -> band k from a unit flow on the assignment arcs."""
        out = {}
        for pos, j in enumerate(self.cols):
            for bp, k in enumerate(self.bands):
                if flow.get((self.col_node(pos), self.band_node(bp)), 0) >= 1:
                    out[j] = k
                    break
        return out


def build_flow_instance(
    problem: NominalProblem, scheme: BandScheme, x: np.ndarray, i: int
) -> FlowNet:
    """Separation network for row ``i`` at point ``x``."""
    if not 0 <= i < problem.m:
        raise IndexError(f"row {i} out of range for m={problem.m}")
    x = np.asarray(x, dtype=float)
    cols = tuple(scheme.uncertain_cols(i))
    bands = tuple(scheme.bands)
    prof = compute_profile(scheme, len(cols), row=i)
    arcs: list[tuple[int, int, int, float]] = []
    n_cols = len(cols)
    for pos in range(n_cols):
        arcs.append((0, 1 + pos, 1, 0.0))
    for pos, j in enumerate(cols):
        d = scheme.thresholds(i, j)
        for bp, k in enumerate(bands):
            cost = float(-(d[scheme.index(k)] * x[j]))
            arcs.append((1 + pos, 1 + n_cols + bp, 1, cost))
    sink = 1 + n_cols + len(bands)
    for bp, k in enumerate(bands):
        arcs.append((1 + n_cols + bp, sink, int(prof.theta[k]), 0.0))
    return FlowNet(
        row=i,
        cols=cols,
        bands=bands,
        theta=dict(prof.theta),
        arcs=tuple(arcs),
        value=n_cols,
    )


def min_cost_flow(net: FlowNet) -> tuple[dict[tuple[int, int], int], float]:
    """Integral min-cost flow of the required value, by successive
    shortest augmenting paths with node potentials.

    The network is acyclic with nodes in topological order, so one
    relaxation pass over the arcs yields exact initial potentials despite
    the negative assignment-arc costs; afterwards every augmentation runs
    Dijkstra on reduced costs.  Ties between equal-cost paths resolve to
    the lowest node index, making the returned flow deterministic.

    Returns (flow keyed by (tail, head), total cost).  The cost is
    accumulated column-by-column in ascending column order from the
    realized assignment.
    """
    nn = net.n_nodes
    n_arcs = len(net.arcs)
    to = np.empty(2 * n_arcs, dtype=np.int64)
    cap = np.empty(2 * n_arcs, dtype=np.int64)
    cost = np.empty(2 * n_arcs)
    adj: list[list[int]] = [[] for _ in range(nn)]
    for a, (tail, head, capacity, unit_cost) in enumerate(net.arcs):
        to[2 * a] = head
        cap[2 * a] = capacity
        cost[2 * a] = unit_cost
        adj[tail].append(2 * a)
        to[2 * a + 1] = tail
        cap[2 * a + 1] = 0
        cost[2 * a + 1] = -unit_cost
        adj[head].append(2 * a + 1)

    # exact initial potentials: one pass in topological (= index) order
    pot = np.full(nn, np.inf)
    pot[net.source] = 0.0
    for u in range(nn):
        if pot[u] == np.inf:
            continue
        for a in adj[u]:
            if cap[a] > 0 and pot[u] + cost[a] < pot[to[a]]:
                pot[to[a]] = pot[u] + cost[a]
    pot[pot == np.inf] = 0.0

    sent = 0
    while sent < net.value:
        dist = np.full(nn, np.inf)
        dist[net.source] = 0.0
        parent_arc = np.full(nn, -1, dtype=np.int64)
        heap = [(0.0, net.source)]
        visited = np.zeros(nn, dtype=bool)
        while heap:
            d_u, u = heapq.heappop(heap)
            if visited[u]:
                continue
            visited[u] = True
            for a in adj[u]:
                v = int(to[a])
                if cap[a] <= 0 or visited[v]:
                    continue
                nd = d_u + cost[a] + pot[u] - pot[v]
                if nd < dist[v]:
                    dist[v] = nd
                    parent_arc[v] = a
                    heapq.heappush(heap, (nd, v))
        if not visited[net.sink]:
            raise FlowError(
                f"network admits no flow of value {net.value} "
                f"(stuck after {sent} units)"
            )
        d_t = dist[net.sink]
        for v in range(nn):
            pot[v] += dist[v] if dist[v] < np.inf else d_t
        # bottleneck along the augmenting path (always 1 here: source arcs)
        push = None
        v = net.sink
        while v != net.source:
            a = int(parent_arc[v])
            push = int(cap[a]) if push is None else min(push, int(cap[a]))
            v = int(to[a ^ 1])
        v = net.sink
        while v != net.source:
            a = int(parent_arc[v])
            cap[a] -= push
            cap[a ^ 1] += push
            v = int(to[a ^ 1])
        sent += push

    flow: dict[tuple[int, int], int] = {}
    for a, (tail, head, capacity, _) in enumerate(net.arcs):
        f = capacity - int(cap[2 * a])
        if f > 0:
            flow[(tail, head)] = f

    return flow, _assignment_cost(net, net.assignment(flow))


def _assignment_cost(net: FlowNet, assign: dict[int, int]) -> float:
    """Total cost of an assignment, summed in ascending column order.

    Mirrors the arithmetic of the exhaustive reference (sum of
    ``d_ij^k x_j`` terms in column order, negated) so the two agree to the
    last bit on identical assignments.
    """
    total = 0.0
    band_pos = {k: bp for bp, k in enumerate(net.bands)}
    arc_cost = {(tail, head): c for tail, head, _, c in net.arcs}
    for pos, j in enumerate(net.cols):
        k = assign[j]
        total += arc_cost[(net.col_node(pos), net.band_node(band_pos[k]))]
    return total


@dataclass(frozen=True)
class RowCheck:
    """Robustness record of one row at a point."""

    row: int
    lhs: float
    slack: float
    robust: bool


@dataclass(frozen=True)
class Cut:
    """A violated robustness inequality realizing one worst-case scenario."""

    coeffs: np.ndarray
    rhs: float
    row: int
    scenario: Scenario

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=float))


def check_robust(
    problem: NominalProblem,
    scheme: BandScheme,
    x: np.ndarray,
    tol: float = CHECK_TOL,
) -> list[RowCheck]:
    """Worst-case feasibility of every row at ``x`` (x >= 0).

    ``lhs`` is the nominal row value plus the maximum deviation; the row is
    robust when ``lhs <= b_i + tol``.
    """
    x = np.asarray(x, dtype=float)
    out = []
    for i in range(problem.m):
        nominal = float(problem.A[i] @ x)
        if scheme.uncertain_cols(i):
            _, cost = min_cost_flow(build_flow_instance(problem, scheme, x, i))
            lhs = nominal - cost
        else:
            lhs = nominal
        slack = float(problem.b[i]) - lhs
        out.append(
            RowCheck(row=i, lhs=float(lhs), slack=slack, robust=bool(slack >= -tol))
        )
    return out


def _completion_assignment(
    scheme: BandScheme, cols: list[int], row: int
) -> dict[int, int]:
    """Deterministic profile-count assignment: ascending columns fill
    ascending bands."""
    prof = compute_profile(scheme, len(cols), row=row)
    out = {}
    pos = 0
    for k in scheme.bands:
        for j in cols[pos : pos + prof.theta[k]]:
            out[j] = k
        pos += prof.theta[k]
    return out


def extract_cut(
    problem: NominalProblem,
    scheme: BandScheme,
    x: np.ndarray,
    i: int,
    flow: dict[tuple[int, int], int],
    tol: float = CHECK_TOL,
) -> Cut:
    """Cut ``coeffs'x <= b_i`` realized by an optimal flow for row ``i``.

    ``coeffs_j = a_ij + d_ij^{k(j)}`` where k(j) is the band receiving
    column j's flow unit.  The embedded scenario places row i's deviations
    per the flow and completes every other row deterministically at
    profile counts, so the whole matrix passes scenario validation with
    counts exactly theta.  Raises ValueError when the cut would not be
    violated by ``x`` (the row is not worst-case infeasible at this point).
    """
    x = np.asarray(x, dtype=float)
    net = build_flow_instance(problem, scheme, x, i)
    assign = net.assignment(flow)
    coeffs = problem.A[i].copy()
    dev = np.zeros((problem.m, problem.n))
    for j, k in assign.items():
        d = scheme.thresholds(i, j)
        dev[i, j] = d[scheme.index(k)]
        coeffs[j] += dev[i, j]
    for r in range(problem.m):
        if r == i:
            continue
        cols = scheme.uncertain_cols(r)
        if not cols:
            continue
        for j, k in _completion_assignment(scheme, cols, r).items():
            d = scheme.thresholds(r, j)
            dev[r, j] = d[scheme.index(k)]
    violation = float(coeffs @ x) - float(problem.b[i])
    if violation <= tol:
        raise ValueError(
            f"row {i} is not violated at this point (violation {violation:.3g})"
        )
    return Cut(coeffs=coeffs, rhs=float(problem.b[i]), row=i, scenario=Scenario(dev))
