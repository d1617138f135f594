"""Brute-force references that the main evaluation paths are checked against.

Nothing here touches the Meijer-G code or the residue formulas.  The Mellin
line integral uses only ``log_gamma`` and ``zeta_complex``; divisor sums use
trial division; reference constants come from a separate alternating-series
implementation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConvergenceError, DomainError
from .identities import IdentityCase
from .specfun import log_gamma, zeta_complex


@dataclass(frozen=True)
class OracleConfig:
    """Quadrature settings for the Mellin inversion.

    ``line_c`` of None picks max(1/k, 1+r) + 1.  ``series_cap`` bounds the
    direct brute-force Lambert sum in :func:`direct_lambert`.
    """

    line_c: float | None = None
    height_T: float = 60.0
    step_h: float = 0.1
    series_cap: int = 4000

    def __post_init__(self) -> None:
        if not (self.height_T > 0 and 0 < self.step_h <= self.height_T):
            raise DomainError("need 0 < step_h <= height_T")
        if self.series_cap < 1:
            raise DomainError("series_cap must be >= 1")


def _line_c(case: IdentityCase, cfg: OracleConfig) -> float:
    edge = max(1.0 / case.k, 1.0 + case.r)
    c = edge + 1.0 if cfg.line_c is None else float(cfg.line_c)
    if not c > edge:
        raise DomainError(f"line_c = {c} must exceed max(1/k, 1+r) = {edge}")
    return c


def mellin_inversion(case: IdentityCase, cfg: OracleConfig | None = None) -> float:
    """(1/2πi) ∫_{(c)} Γ(s) ζ(ks) ζ(s-r) x^{-s} ds by the trapezoidal rule.

    The integrand is conjugate-symmetric, so only t >= 0 is sampled.
    """
    cfg = cfg or OracleConfig()
    c = _line_c(case, cfg)
    k, r, x = case.k, case.r, case.x
    log_x = math.log(x)

    def f(t: float) -> complex:
        s = complex(c, t)
        return cmath.exp(log_gamma(s) - s * log_x) * zeta_complex(k * s) * zeta_complex(s - r)

    h = cfg.step_h
    n = int(math.ceil(cfg.height_T / h))
    vals = [0.5 * f(0.0).real] + [f(i * h).real for i in range(1, n + 1)]
    edge = abs(vals[-1])
    total = math.fsum(vals)
    if edge > 1e-9 * max(abs(total), 1e-300):
        raise ConvergenceError(f"integrand still {edge:.3e} at height {n * h}")
    return h * total / math.pi


def _kth_power_divisors(k: int, n: int) -> list[int]:
    """All d >= 1 with d^k | n, by trial division."""
    if n < 1:
        raise DomainError("n must be >= 1")
    if k == 1:
        # pair d with n/d below sqrt(n)
        out = []
        d = 1
        while d * d <= n:
            if n % d == 0:
                out.append(d)
                if d * d != n:
                    out.append(n // d)
            d += 1
        return out
    out = []
    d = 1
    while d**k <= n:
        if n % d**k == 0:
            out.append(d)
        d += 1
    return out


def _power(q: int, e: int) -> float:
    return float(q**e) if e >= 0 else 1.0 / float(q ** (-e))


def brute_divisor_d(k: int, r: int, n: int) -> float:
    """D_{k,r}(n) by trial division over d with d^k <= n."""
    return math.fsum(_power(n // d**k, r) for d in _kth_power_divisors(k, n))


def brute_divisor_s(k: int, r: int, n: int) -> float:
    """S_{k,r}(n) by trial division over d with d^k <= n."""
    return math.fsum(_power(n // d**k, -r) * float(d ** (k - 1)) for d in _kth_power_divisors(k, n))


def direct_lambert(case: IdentityCase, cfg: OracleConfig | None = None) -> float:
    """sum_n D_{k,r}(n) e^{-nx} with trial-division coefficients.

    Stops once n^{1+max(r,0)} e^{-nx} (a bound on the summand) is negligible,
    or after ``series_cap`` terms.
    """
    cfg = cfg or OracleConfig()
    p = 1 + max(case.r, 0)
    terms: list[float] = []
    for n in range(1, cfg.series_cap + 1):
        terms.append(brute_divisor_d(case.k, case.r, n) * math.exp(-n * case.x))
        if n * case.x > p and p * math.log(n) - n * case.x < math.log(1e-18 * abs(terms[0])):
            break
    return math.fsum(terms)


# ---------------------------------------------------------------- constants


def _borwein_d(n: int) -> list[int]:
    out, acc = [], 0
    for i in range(n + 1):
        acc += n * math.factorial(n + i - 1) * 4**i // (math.factorial(n - i) * math.factorial(2 * i))
        out.append(acc)
    return out


def eta(s: float, terms: int = 48) -> float:
    """Dirichlet eta by Borwein's acceleration (real s > 0)."""
    d = _borwein_d(terms)
    dn = d[-1]
    parts = [float(Fraction(d[j] - dn, dn)) * (-1) ** j / (j + 1) ** s for j in range(terms)]
    return -math.fsum(parts)


def reference_zeta(s: float, terms: int = 48) -> float:
    """ζ(s) for real s != 1: eta for s > 0, the functional equation below."""
    if s == 1:
        raise DomainError("pole at s = 1")
    if s > 0:
        return eta(s, terms) / (1.0 - 2.0 ** (1.0 - s))
    w = 1.0 - s
    return 2.0**s * math.pi ** (s - 1) * math.sin(math.pi * s / 2) * math.gamma(w) * reference_zeta(w, terms)


def reference_constants(terms: int = 48) -> dict[str, float]:
    return {
        "zeta_half": reference_zeta(0.5, terms),
        "zeta_quarter": reference_zeta(0.25, terms),
        "zeta_minus_half": -reference_zeta(1.5, terms) / (4.0 * math.pi),
        "zeta_3": reference_zeta(3.0, terms),
        "zeta_5": reference_zeta(5.0, terms),
        "zeta_7": reference_zeta(7.0, terms),
    }


__all__ = [
    "OracleConfig",
    "mellin_inversion",
    "brute_divisor_d",
    "brute_divisor_s",
    "direct_lambert",
    "eta",
    "reference_zeta",
    "reference_constants",
]
