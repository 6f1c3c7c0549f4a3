"""Numba toggle for the hot kernels.

The environment variable ``TOPOFIELD_NUMBA`` selects the path at import time:
any of ``0/false/no/off`` forces the pure-NumPy fallbacks, anything else (or
an importable numba) enables JIT compilation.  Both paths compute identical
results; the fallback is for portability and verification, not speed.
"""
from __future__ import annotations

import os

__all__ = ["NUMBA_ENABLED", "jit"]


def _env_enabled() -> bool:
    flag = os.environ.get("TOPOFIELD_NUMBA", "1").strip().lower()
    return flag not in ("0", "false", "no", "off")


NUMBA_ENABLED = False
if _env_enabled():
    try:
        import numba  # noqa: F401

        NUMBA_ENABLED = True
    except ImportError:
        NUMBA_ENABLED = False


def jit(func):
    """numba.njit(cache=True) when enabled, identity otherwise."""
    if NUMBA_ENABLED:
        import numba

        return numba.njit(cache=True)(func)
    return func
