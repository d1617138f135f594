"""Kernel backend selection.

``ZETALAB_BACKEND=numpy`` forces the pure-numpy kernels; ``numba`` (the
default) uses the jitted ones when numba imports cleanly.
"""

from __future__ import annotations

import os

_FLAG = "ZETALAB_BACKEND"


def requested_backend() -> str:
    value = os.environ.get(_FLAG, "numba").strip().lower()
    if value not in ("numba", "numpy"):
        raise ValueError(f"{_FLAG} must be 'numba' or 'numpy', got {value!r}")
    return value


def numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def active_backend() -> str:
    want = requested_backend()
    if want == "numba" and not numba_available():
        return "numpy"
    return want


def worker_count(default: int = 1) -> int:
    """Worker pool size from ``ZETALAB_THREADS`` (at least 1)."""
    raw = os.environ.get("ZETALAB_THREADS")
    if raw is None or not raw.strip():
        return max(1, default)
    try:
        return max(1, int(raw))
    except ValueError:
        return max(1, default)
