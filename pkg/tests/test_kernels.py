"""The compiled and pure kernels must be interchangeable, bit for bit."""

from __future__ import annotations

import os
import subprocess
import sys

import numpy as np
import pytest

from multiband import _kernels, _kernels_py
from multiband._kernels import kernel_backend

try:
    from multiband import _speedups
except ImportError:  # pragma: no cover - toolchain dependent
    _speedups = None

needs_compiled = pytest.mark.skipif(
    _speedups is None, reason="compiled extension not built"
)


def test_backend_reports_a_known_name():
    assert kernel_backend() in ("compiled", "pure")
    assert kernel_backend() == _kernels.BACKEND


@needs_compiled
def test_compiled_backend_selected_when_available():
    assert kernel_backend() == "compiled"
    assert _kernels.simplex_loop is _speedups.simplex_loop


def _random_tableau(rng, m, n):
    # standard-form prepared tableau: A | I | rhs with slack basis
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


@needs_compiled
def test_simplex_loop_backends_identical():
    rng = np.random.default_rng(42)
    for _ in range(200):
        m = int(rng.integers(1, 6))
        n = int(rng.integers(1, 6))
        T1, basis1, allowed = _random_tableau(rng, m, n)
        T2, basis2 = T1.copy(), basis1.copy()
        r1 = _kernels_py.simplex_loop(T1, basis1, allowed, 3 * (m + n), 10_000)
        r2 = _speedups.simplex_loop(T2, basis2, allowed, 3 * (m + n), 10_000)
        assert r1 == r2
        assert np.array_equal(basis1, basis2)
        assert np.array_equal(T1, T2)  # identical iterates, not just optima


def _random_sweep_input(rng):
    n_nodes = int(rng.integers(1, 4))
    ndim = int(rng.integers(1, 5))
    values, offsets = [], [0]
    tails = rng.integers(0, n_nodes, size=ndim).astype(np.int64)
    heads = np.empty(ndim, dtype=np.int64)
    for d in range(ndim):
        k = int(rng.integers(1, 4))
        values.extend(np.sort(rng.integers(-4, 5, size=k)).astype(float))
        offsets.append(offsets[-1] + k)
        if rng.random() < 0.4 or n_nodes == 1:
            heads[d] = -1
            # cap values must be nonnegative to be satisfiable
            lo = offsets[-2]
            values[lo:] = np.abs(values[lo:]).tolist()
        else:
            h = int(rng.integers(0, n_nodes - 1))
            heads[d] = h if h < tails[d] else h + 1
    return (np.asarray(values), np.asarray(offsets, dtype=np.int64),
            tails, heads, n_nodes)


@needs_compiled
def test_sweep_feasible_w_backends_identical():
    rng = np.random.default_rng(7)
    for _ in range(150):
        args = _random_sweep_input(rng)
        out1 = _kernels_py.sweep_feasible_w(*args)
        out2 = _speedups.sweep_feasible_w(*args)
        assert out1 == out2


def test_pure_env_var_forces_fallback():
    env = dict(os.environ, MULTIBAND_PURE="1")
    code = ("from multiband._kernels import kernel_backend;"
            "print(kernel_backend())")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "pure"
