"""Kernel acceleration switch.

The queueing kernels in ``locdb._kernels`` are written as plain Python
functions over numpy arrays.  By default they are compiled with numba's
``@njit``; setting the environment variable ``LOCDB_NUMBA=0`` (or ``off``,
``false``, ``no``) selects the uncompiled fallback instead.  Both paths
execute the same source, so results are identical; only speed differs.

numba is imported lazily so that code paths that never touch a kernel
(config parsing, the analytic formulas, the report command) do not pay
the JIT toolchain import cost.
"""

from __future__ import annotations

import os

_FALSEY = {"0", "off", "false", "no"}


def numba_requested() -> bool:
    return os.environ.get("LOCDB_NUMBA", "1").strip().lower() not in _FALSEY


def numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def numba_enabled() -> bool:
    return numba_requested() and numba_available()


def maybe_jit(func):
    """Return an ``@njit(cache=True)`` wrapper, or ``func`` unchanged.

    The wrapped function keeps the original accessible as ``py_func``
    either way, so benchmarks can compare both paths explicitly.
    """
    if not numba_enabled():
        func.py_func = func
        return func
    from numba import njit

    return njit(cache=True)(func)
