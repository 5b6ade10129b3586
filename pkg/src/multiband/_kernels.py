"""Kernel selection: compiled extension when available, pure Python otherwise.

Set ``MULTIBAND_PURE=1`` in the environment to force the pure-Python
kernels even when the compiled extension is importable (used by the
benchmark and by tests that exercise both backends).
"""

from __future__ import annotations

import os

if os.environ.get("MULTIBAND_PURE"):
    from . import _kernels_py as _impl

    BACKEND = "pure"
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:  # pragma: no cover - toolchain dependent
        from . import _kernels_py as _impl  # type: ignore[no-redef]

        BACKEND = "pure"

SIMPLEX_OPTIMAL = _impl.SIMPLEX_OPTIMAL
SIMPLEX_UNBOUNDED = _impl.SIMPLEX_UNBOUNDED
SIMPLEX_ITER_LIMIT = _impl.SIMPLEX_ITER_LIMIT

simplex_loop = _impl.simplex_loop
sweep_feasible_w = _impl.sweep_feasible_w


def kernel_backend() -> str:
    """Name of the active kernel implementation ("compiled" or "pure")."""
    return BACKEND
