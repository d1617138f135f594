"""numba-jitted kernels; loop forms of the functions in ``_numpy``."""

from __future__ import annotations

import cmath
import math

import numpy as np
from numba import njit

from ._lanczos import LANCZOS_COEF, LANCZOS_G, HALF_LOG_2PI

_COEF = LANCZOS_COEF.copy()
_G = LANCZOS_G
_H = HALF_LOG_2PI


@njit(cache=True, nogil=True)
def sieve_d(k, r, n_max):
    out = np.zeros(n_max + 1)
    d = 1
    while d**k <= n_max:
        q = d**k
        for m in range(1, n_max // q + 1):
            out[q * m] += float(m) ** r
        d += 1
    return out


@njit(cache=True, nogil=True)
def sieve_s(k, r, n_max):
    out = np.zeros(n_max + 1)
    d = 1
    while d**k <= n_max:
        q = d**k
        wd = float(d) ** (k - 1)
        for m in range(1, n_max // q + 1):
            out[q * m] += float(m) ** (-r) * wd
        d += 1
    return out


@njit(cache=True, nogil=True)
def exp_weighted_sum(coef, x):
    acc = 0.0
    for n in range(1, coef.shape[0]):
        acc += coef[n] * math.exp(-x * n)
    return acc


@njit(cache=True, nogil=True)
def _lgamma1(z):
    shift = 0j
    while z.real < 0.5:
        shift += cmath.log(z)
        z += 1.0
    zm = z - 1.0
    acc = _COEF[0] + 0j
    for i in range(1, _COEF.shape[0]):
        acc += _COEF[i] / (zm + i)
    t = zm + _G + 0.5
    return _H + (zm + 0.5) * cmath.log(t) - t + cmath.log(acc) - shift


@njit(cache=True, nogil=True)
def lgamma_vec(z):
    out = np.empty(z.shape[0], dtype=np.complex128)
    for i in range(z.shape[0]):
        out[i] = _lgamma1(z[i])
    return out


@njit(cache=True, nogil=True)
def lgamma_nodes(b, c, t):
    out = np.zeros(t.shape[0], dtype=np.complex128)
    for i in range(t.shape[0]):
        acc = 0j
        for j in range(b.shape[0]):
            acc += _lgamma1(complex(c + b[j], t[i]))
        out[i] = acc
    return out


@njit(cache=True, nogil=True)
def mb_line_sum(lnmod, t, w):
    out = np.empty(lnmod.shape[0], dtype=np.complex128)
    for p in range(lnmod.shape[0]):
        lm = lnmod[p]
        re = 0.0
        im = 0.0
        for i in range(t.shape[0]):
            ph = t[i] * lm
            c = math.cos(ph)
            s = math.sin(ph)
            re += w[i].real * c + w[i].imag * s
            im += w[i].imag * c - w[i].real * s
        out[p] = complex(re, im)
    return out


@njit(cache=True, nogil=True)
def _log1m(y):
    if abs(y) < 1e-4:
        return -y * (1.0 + y * (0.5 + y * (1.0 / 3.0 + y * 0.25)))
    return cmath.log(1.0 - y)


@njit(cache=True, nogil=True)
def log1mexp_series(w, k, m_max):
    acc = 0j
    inv = 1.0 / k
    for m in range(1, m_max + 1):
        acc += _log1m(cmath.exp(-w * float(m) ** inv))
    return acc


@njit(cache=True, nogil=True)
def lbar_series(w, k, n_max):
    acc = 0j
    inv = 1.0 / k
    for n in range(1, n_max + 1):
        root = float(n) ** inv
        y = cmath.exp(-w * root)
        acc += root / n * y / (1.0 - y)
    return acc


@njit(cache=True, nogil=True)
def derivative_form_sum(k, r, x, n_max, euler):
    acc = 0.0
    for n in range(1, n_max + 1):
        u = float(n) ** k * x
        q = math.exp(-u)
        den = (-math.expm1(-u)) ** (r + 1)
        if r == 0:
            num = q
        else:
            num = 0.0
            qp = q
            for a in euler:
                num += a * qp
                qp *= q
        acc += num / den
    return acc
