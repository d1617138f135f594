"""Gamma, Riemann zeta and Bernoulli numbers.

Scalar entry points work internally in ``numpy.longdouble`` (80-bit on x86)
so that the phase of ``log Γ`` survives exponentiation at |Im s| ~ 200; on
platforms where longdouble is plain double the accuracy degrades gracefully
to roughly 1e-12.  The batched quadrature kernels use a double-precision
Lanczos sum instead (see ``zetalab.kernels``).
"""

from __future__ import annotations

import decimal
import math
import threading
from fractions import Fraction
from functools import lru_cache
from numbers import Complex, Real

import numpy as np

from .errors import DomainError, PoleError

LD = np.longdouble
CLD = np.clongdouble

PI_LD = LD("3.14159265358979323846264338327950288")
LOG_PI_LD = LD("1.14472988584940017414342735135305871")
LOG_2_LD = LD("0.693147180559945309417232121458176568")
HALF_LOG_2PI_LD = LD("0.918938533204672741780329736405617640")

_STIRLING_MIN_MODULUS = 17.0
_STIRLING_TERMS = 14

# ---------------------------------------------------------------- Bernoulli

_BERNOULLI_CACHE_LIMIT = 256
_bern_lock = threading.Lock()
_bern: list[Fraction] = [Fraction(1)]


def _extend_bernoulli(upto: int) -> None:
    # sum_{j=0}^{m} C(m+1, j) B_j = 0, solved for B_m
    with _bern_lock:
        while len(_bern) <= upto:
            m = len(_bern)
            if m >= 3 and m % 2 == 1:
                _bern.append(Fraction(0))
                continue
            acc = Fraction(0)
            binom = 1  # C(m+1, 0)
            for j in range(m):
                if _bern[j]:
                    acc += binom * _bern[j]
                binom = binom * (m + 1 - j) // (j + 1)
            _bern.append(-acc / (m + 1))


def bernoulli(n: int) -> Fraction:
    """Exact Bernoulli number B_n with the convention B_1 = -1/2."""
    n = int(n)
    if n < 0:
        raise DomainError("Bernoulli index must be non-negative")
    if n >= 3 and n % 2 == 1:
        return Fraction(0)
    if n < len(_bern):
        return _bern[n]
    if n <= _BERNOULLI_CACHE_LIMIT:
        _extend_bernoulli(_BERNOULLI_CACHE_LIMIT if n > 64 else n)
        return _bern[n]
    _extend_bernoulli(_BERNOULLI_CACHE_LIMIT)
    return _bernoulli_uncached(n)


def _bernoulli_uncached(n: int) -> Fraction:
    vals = list(_bern)
    while len(vals) <= n:
        m = len(vals)
        if m % 2 == 1:
            vals.append(Fraction(0))
            continue
        acc = Fraction(0)
        binom = 1
        for j in range(m):
            if vals[j]:
                acc += binom * vals[j]
            binom = binom * (m + 1 - j) // (j + 1)
        vals.append(-acc / (m + 1))
    return vals[n]


_DEC = decimal.Context(prec=32)


def _frac_to_ld(q: Fraction) -> np.longdouble:
    # via a decimal string: numpy parses it at full long double precision
    return LD(str(_DEC.divide(decimal.Decimal(q.numerator), decimal.Decimal(q.denominator))))


def _cld(re: np.longdouble, im: np.longdouble) -> np.clongdouble:
    out = np.zeros((), dtype=CLD)
    out.real = re
    out.imag = im
    return out[()]


@lru_cache(maxsize=1)
def _stirling_coefficients() -> tuple[np.longdouble, ...]:
    return tuple(
        _frac_to_ld(bernoulli(2 * j) / ((2 * j) * (2 * j - 1)))
        for j in range(1, _STIRLING_TERMS + 1)
    )


# ---------------------------------------------------------------- Gamma


def _is_nonpositive_integer(z: complex) -> bool:
    return z.imag == 0.0 and z.real <= 0.0 and float(z.real).is_integer()


def _sinpi_cospi(a: float) -> tuple[np.longdouble, np.longdouble]:
    """sin(pi a), cos(pi a) with exact argument reduction."""
    r = math.fmod(a, 2.0)
    y = 2.0 * r  # exact
    q = round(y)
    f = LD(y - q) / 2  # |f| <= 1/4, exact
    s, c = np.sin(PI_LD * f), np.cos(PI_LD * f)
    q %= 4
    if q == 0:
        return s, c
    if q == 1:
        return c, -s
    if q == 2:
        return -s, -c
    return -c, s


def _sinpi_complex(z: complex) -> np.clongdouble:
    s, c = _sinpi_cospi(z.real)
    b = PI_LD * LD(z.imag)
    return _cld(s * np.cosh(b), c * np.sinh(b))


def _log_gamma_ld(z: complex) -> np.clongdouble:
    """Principal-branch log Γ in long double (Stirling after upward shift)."""
    w = CLD(z)
    shift = CLD(0.0)
    while w.real < 0.5 or abs(w) < _STIRLING_MIN_MODULUS:
        shift += np.log(w)
        w += 1
    inv = 1 / w
    inv2 = inv * inv
    series = CLD(0.0)
    power = inv
    for coef in _stirling_coefficients():
        series += coef * power
        power *= inv2
    return (w - LD(0.5)) * np.log(w) - w + HALF_LOG_2PI_LD + series - shift


def _gamma_ld(z: complex) -> np.clongdouble:
    if z.real >= 0.5:
        return np.exp(_log_gamma_ld(z))
    return PI_LD / (_sinpi_complex(z) * np.exp(_log_gamma_ld(1.0 - z)))


def _as_complex(s: Complex) -> complex:
    z = complex(s)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"non-finite argument {s!r}")
    return z


def _finite(value: complex, what: str) -> complex:
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise OverflowError(f"{what} is not representable as a double")
    return value


def gamma(s: Complex) -> complex | float:
    """Γ(s). Real input yields a float, complex input a complex."""
    z = _as_complex(s)
    if _is_nonpositive_integer(z):
        raise PoleError(f"gamma has a pole at {s!r}")
    val = _finite(complex(_gamma_ld(z)), "gamma")
    if isinstance(s, Real):
        return val.real
    return val


def log_gamma(s: Complex) -> complex:
    """Principal branch of log Γ(s), continuous off the negative real axis."""
    z = _as_complex(s)
    if _is_nonpositive_integer(z):
        raise PoleError(f"log_gamma has a pole at {s!r}")
    return complex(_log_gamma_ld(z))


# ---------------------------------------------------------------- zeta

_ETA_N = 40


def _eta_weights(n: int) -> tuple[float, ...]:
    # Borwein's accelerated alternating series: weights (d_k - d_n)/d_n
    d = []
    acc = 0
    for i in range(n + 1):
        acc += math.factorial(n + i - 1) * 4**i * n // (math.factorial(n - i) * math.factorial(2 * i))
        d.append(acc)
    dn = d[n]
    return tuple(float(Fraction((-1) ** kk * (d[kk] - dn), dn)) for kk in range(n))


_ETA_W = _eta_weights(_ETA_N)


def _eta_real(s: float) -> float:
    return -math.fsum(w * math.pow(kk + 1, -s) for kk, w in enumerate(_ETA_W))


@lru_cache(maxsize=None)
def _em_coefficient(j: int) -> np.longdouble:
    return _frac_to_ld(bernoulli(2 * j) / math.factorial(2 * j))


def _euler_maclaurin(s: complex, n_terms: int | None = None) -> np.clongdouble:
    """ζ(s) via Euler-Maclaurin in long double (valid for Re s > -1)."""
    n_big = n_terms if n_terms is not None else max(20, math.ceil(2.0 * abs(s.imag)))
    sl = CLD(s)
    n = np.arange(1, n_big, dtype=LD)
    head = np.sum(np.exp(-sl * np.log(n)))
    nl = LD(n_big)
    log_n = np.log(nl)
    n_pow = np.exp(-sl * log_n)  # N^{-s}
    total = head + n_pow * nl / (sl - 1) + n_pow / 2
    # correction terms B_{2j}/(2j)! * s(s+1)...(s+2j-2) * N^{-s-2j+1}
    rising = sl
    term_pow = n_pow / nl
    prev = math.inf
    for j in range(1, 60):
        term = _em_coefficient(j) * rising * term_pow
        mag = float(abs(term))
        if mag > prev:
            break
        total += term
        if mag <= 1e-22 * float(abs(total)):
            break
        prev = mag
        rising = rising * (sl + 2 * j - 1) * (sl + 2 * j)
        term_pow = term_pow / (nl * nl)
    return total


def _zeta_negative_integer(n: int) -> float:
    # zeta(-n) = (-1)^n B_{n+1}/(n+1)
    return float((-1) ** n * bernoulli(n + 1) / (n + 1))


def zeta_real(s: Real) -> float:
    """Riemann ζ on the real line."""
    s = float(s)
    if not math.isfinite(s):
        raise DomainError("zeta_real needs a finite argument")
    if s == 1.0:
        raise PoleError("zeta has a pole at s = 1")
    if s <= 0.0 and s.is_integer():
        return _zeta_negative_integer(int(-s))
    if s >= 0.5:
        if abs(s - 1.0) < 0.25:
            return float(_euler_maclaurin(complex(s)).real)
        return _eta_real(s) / -math.expm1((1.0 - s) * math.log(2.0))
    # functional equation; 1 - s > 1/2 so Γ(1-s) > 0
    sin_half, _ = _sinpi_cospi(s / 2.0)
    log_mag = LD(s) * LOG_2_LD + (LD(s) - 1) * LOG_PI_LD + _log_gamma_ld(complex(1.0 - s)).real
    val = np.exp(log_mag) * sin_half * LD(zeta_real(1.0 - s))
    out = float(val)
    if not math.isfinite(out):
        raise OverflowError("zeta_real overflows")
    return out


def zeta_complex(s: Complex, terms: int | None = None) -> complex:
    """Riemann ζ for complex s.

    Euler-Maclaurin for Re s >= 0, the functional equation for Re s < 0.
    ``terms`` overrides the Euler-Maclaurin cut N.
    """
    z = _as_complex(s)
    if z == 1.0:
        raise PoleError("zeta has a pole at s = 1")
    if z.real >= 0.0:
        return _finite(complex(_euler_maclaurin(z, terms)), "zeta")
    if _is_nonpositive_integer(z):
        return complex(_zeta_negative_integer(int(-z.real)))
    w = 1.0 - z
    log_fac = CLD(z) * LOG_2_LD + (CLD(z) - 1) * LOG_PI_LD + _log_gamma_ld(w)
    val = np.exp(log_fac) * _sinpi_complex(z / 2.0) * _euler_maclaurin(w, terms)
    return _finite(complex(val), "zeta")


def zeta_prime_neg_even(m: int) -> float:
    """ζ'(M) at a negative even integer M = -2t."""
    if not float(m).is_integer() or m >= 0 or int(m) % 2 != 0:
        raise DomainError("zeta_prime_neg_even needs a negative even integer")
    t = -int(m) // 2
    # (-1)^t (2t)! zeta(2t+1) / (2 (2pi)^{2t})
    mag = np.exp(_log_factorial_ld(2 * t) - 2 * t * (LOG_2_LD + LOG_PI_LD)) / 2
    return (-1) ** t * float(mag) * zeta_real(2 * t + 1)


def zeta_even_exact(m: int) -> float:
    """ζ(2m) from Euler's Bernoulli formula."""
    if m < 1:
        raise DomainError("m must be >= 1")
    b = _frac_to_ld(bernoulli(2 * m))
    mag = np.exp(2 * m * (LOG_2_LD + LOG_PI_LD) - _log_factorial_ld(2 * m)) / 2
    return float((-1) ** (m + 1) * b * mag)


def _log_factorial_ld(n: int) -> np.longdouble:
    return np.log(_frac_to_ld(Fraction(math.factorial(n)))) if n < 1000 else _log_gamma_ld(complex(n + 1)).real


__all__ = [
    "bernoulli",
    "gamma",
    "log_gamma",
    "zeta_real",
    "zeta_complex",
    "zeta_prime_neg_even",
    "zeta_even_exact",
]
