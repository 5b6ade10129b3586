"""Compare the compiled and pure-Python kernels on identical workloads.

Runs the two inner-loop kernels (dense simplex pivoting and the candidate
difference-system sweep) through both backends, checks that the results
agree exactly, and reports wall-clock timings.

Usage:
    python3 benchmarks/bench_kernels.py [--simplex N] [--sweeps N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from multiband import _kernels_py

try:
    from multiband import _speedups
except ImportError:
    _speedups = None


def random_tableau(rng, m, n):
    A = rng.integers(-3, 6, size=(m, n)).astype(float)
    b = rng.integers(1, 9, size=m).astype(float)
    c = rng.integers(-2, 6, size=n).astype(float)
    ncols = n + m
    T = np.zeros((m + 1, ncols + 1))
    T[:m, :n] = A
    T[:m, n:ncols] = np.eye(m)
    T[:m, ncols] = b
    T[m, :n] = -c
    basis = np.arange(n, ncols, dtype=np.int64)
    allowed = np.ones(ncols, dtype=np.uint8)
    return T, basis, allowed


def random_sweep(rng):
    n_nodes = int(rng.integers(2, 5))
    ndim = int(rng.integers(3, 7))
    values, offsets = [], [0]
    tails = rng.integers(0, n_nodes, size=ndim).astype(np.int64)
    heads = np.empty(ndim, dtype=np.int64)
    for d in range(ndim):
        k = int(rng.integers(2, 5))
        if rng.random() < 0.4:
            heads[d] = -1
            vals = np.sort(np.abs(rng.integers(0, 5, size=k))).astype(float)
        else:
            h = int(rng.integers(0, n_nodes - 1))
            heads[d] = h if h < tails[d] else h + 1
            vals = np.sort(rng.integers(-4, 5, size=k)).astype(float)
        values.extend(vals)
        offsets.append(offsets[-1] + k)
    return (np.asarray(values), np.asarray(offsets, dtype=np.int64),
            tails, heads, n_nodes)


def bench_simplex(backend, cases):
    start = time.perf_counter()
    pivots = 0
    results = []
    for T, basis, allowed in cases:
        T, basis = T.copy(), basis.copy()
        bland_after = 3 * (T.shape[0] - 1 + T.shape[1] - 1)
        status, its = backend.simplex_loop(T, basis, allowed, bland_after,
                                           10_000)
        pivots += its
        results.append((status, its, round(float(T[-1, -1]), 9)))
    return time.perf_counter() - start, pivots, results


def bench_sweep(backend, cases):
    start = time.perf_counter()
    combos = 0
    results = []
    for args in cases:
        out, n_combos, n_feasible = backend.sweep_feasible_w(*args)
        combos += n_combos
        results.append((tuple(out), n_combos, n_feasible))
    return time.perf_counter() - start, combos, results


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--simplex", type=int, default=300,
                        help="number of random tableaus (default 300)")
    parser.add_argument("--sweeps", type=int, default=100,
                        help="number of random sweep systems (default 100)")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if _speedups is None:
        print("compiled extension not available; nothing to compare")
        return 1

    rng = np.random.default_rng(args.seed)
    tableaus = [random_tableau(rng, int(rng.integers(2, 12)),
                               int(rng.integers(2, 12)))
                for _ in range(args.simplex)]
    sweeps = [random_sweep(rng) for _ in range(args.sweeps)]

    for name, runner, cases, unit in (
        ("simplex_loop", bench_simplex, tableaus, "pivots"),
        ("sweep_feasible_w", bench_sweep, sweeps, "combinations"),
    ):
        t_pure, work, ref = runner(_kernels_py, cases)
        t_fast, work2, got = runner(_speedups, cases)
        assert work == work2 and ref == got, f"{name}: backends disagree"
        speedup = t_pure / t_fast if t_fast > 0 else float("inf")
        print(f"{name}: {len(cases)} cases, {work} {unit}")
        print(f"  pure     {t_pure * 1e3:8.1f} ms")
        print(f"  compiled {t_fast * 1e3:8.1f} ms   ({speedup:.1f}x)")
    print("backends agree on every case")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
