"""Hot numerical kernels with a numba and a pure-numpy implementation.

The active implementation is chosen once at import from ``ZETALAB_BACKEND``.
Both implementations stay importable by name for benchmarking and
cross-checks (``get_backend("numpy")``, ``get_backend("numba")``).
"""

from __future__ import annotations

from types import ModuleType

from .._backend import active_backend

KERNEL_NAMES = (
    "sieve_d",
    "sieve_s",
    "exp_weighted_sum",
    "lgamma_vec",
    "lgamma_nodes",
    "mb_line_sum",
    "log1mexp_series",
    "lbar_series",
    "derivative_form_sum",
)


def get_backend(name: str) -> ModuleType:
    if name == "numba":
        from . import _numba

        return _numba
    if name == "numpy":
        from . import _numpy

        return _numpy
    raise ValueError(f"unknown backend {name!r}")


BACKEND = active_backend()
_impl = get_backend(BACKEND)

sieve_d = _impl.sieve_d
sieve_s = _impl.sieve_s
exp_weighted_sum = _impl.exp_weighted_sum
lgamma_vec = _impl.lgamma_vec
lgamma_nodes = _impl.lgamma_nodes
mb_line_sum = _impl.mb_line_sum
log1mexp_series = _impl.log1mexp_series
lbar_series = _impl.lbar_series
derivative_form_sum = _impl.derivative_form_sum

__all__ = ["BACKEND", "KERNEL_NAMES", "get_backend", *KERNEL_NAMES]
