"""Pure-numpy kernels. Semantics match ``_numba`` exactly; only speed differs."""

from __future__ import annotations

import numpy as np

from ._lanczos import LANCZOS_COEF, LANCZOS_G, HALF_LOG_2PI

_CHUNK = 1 << 16


def sieve_d(k: int, r: int, n_max: int) -> np.ndarray:
    out = np.zeros(n_max + 1)
    d = 1
    while d**k <= n_max:
        q = d**k
        m = np.arange(1, n_max // q + 1, dtype=np.float64)
        out[q::q] += m**r
        d += 1
    return out


def sieve_s(k: int, r: int, n_max: int) -> np.ndarray:
    out = np.zeros(n_max + 1)
    d = 1
    while d**k <= n_max:
        q = d**k
        m = np.arange(1, n_max // q + 1, dtype=np.float64)
        out[q::q] += m ** (-r) * float(d) ** (k - 1)
        d += 1
    return out


def exp_weighted_sum(coef: np.ndarray, x: float) -> float:
    n = np.arange(1, coef.shape[0], dtype=np.float64)
    return float(np.sum(coef[1:] * np.exp(-x * n)))


def lgamma_vec(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.complex128).copy()
    shift = np.zeros_like(z)
    low = z.real < 0.5
    while np.any(low):
        shift[low] += np.log(z[low])
        z[low] += 1.0
        low = z.real < 0.5
    zm = z - 1.0
    acc = np.full_like(zm, LANCZOS_COEF[0])
    for i in range(1, LANCZOS_COEF.shape[0]):
        acc += LANCZOS_COEF[i] / (zm + i)
    t = zm + LANCZOS_G + 0.5
    return HALF_LOG_2PI + (zm + 0.5) * np.log(t) - t + np.log(acc) - shift


def lgamma_nodes(b: np.ndarray, c: float, t: np.ndarray) -> np.ndarray:
    out = np.zeros(t.shape[0], dtype=np.complex128)
    for bj in b:
        out += lgamma_vec(c + bj + 1j * t)
    return out


def mb_line_sum(lnmod: np.ndarray, t: np.ndarray, w: np.ndarray) -> np.ndarray:
    out = np.empty(lnmod.shape[0], dtype=np.complex128)
    step = max(1, _CHUNK // max(1, t.shape[0]))
    for lo in range(0, lnmod.shape[0], step):
        block = lnmod[lo : lo + step]
        phase = np.outer(block, t)
        out[lo : lo + step] = (np.cos(phase) - 1j * np.sin(phase)) @ w
    return out


def _log1m(y: np.ndarray) -> np.ndarray:
    small = np.abs(y) < 1e-4
    out = np.empty_like(y)
    ys = y[small]
    out[small] = -ys * (1.0 + ys * (0.5 + ys * (1.0 / 3.0 + ys * 0.25)))
    out[~small] = np.log(1.0 - y[~small])
    return out


def log1mexp_series(w: complex, k: int, m_max: int) -> complex:
    m = np.arange(1, m_max + 1, dtype=np.float64)
    y = np.exp(-w * m ** (1.0 / k))
    return complex(np.sum(_log1m(y)))


def lbar_series(w: complex, k: int, n_max: int) -> complex:
    n = np.arange(1, n_max + 1, dtype=np.float64)
    root = n ** (1.0 / k)
    y = np.exp(-w * root)
    return complex(np.sum(root / n * y / (1.0 - y)))


def derivative_form_sum(k: int, r: int, x: float, n_max: int, euler: np.ndarray) -> float:
    n = np.arange(1, n_max + 1, dtype=np.float64)
    u = n**k * x
    q = np.exp(-u)
    den = (-np.expm1(-u)) ** (r + 1)
    if r == 0:
        num = q
    else:
        num = np.zeros_like(q)
        qp = q.copy()
        for a in euler:
            num += a * qp
            qp *= q
    return float(np.sum(num / den))
