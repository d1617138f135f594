"""Generalised divisor functions and the Lambert / Dirichlet sums built on them.

D_{k,r}(n) = sum over d^k | n of (n/d^k)^r
S_{k,r}(n) = sum over d^k | n of (n/d^k)^(-r) d^(k-1)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Literal

import numpy as np

from . import kernels
from .errors import ConvergenceError, DomainError
from .specfun import zeta_real

EULER_GAMMA = 0.57721566490153286061

TailMode = Literal["geometric", "integral"]


@dataclass(frozen=True)
class DivisorSpec:
    k: int
    r: int

    def __post_init__(self) -> None:
        for name in ("k", "r"):
            v = getattr(self, name)
            if isinstance(v, bool) or not float(v).is_integer():
                raise DomainError(f"{name} must be an integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        if self.k < 1:
            raise DomainError("k must be >= 1")


@dataclass(frozen=True)
class TruncationPolicy:
    abs_tol: float = 1e-16
    rel_tol: float = 1e-15
    max_terms: int = 5_000_000
    tail_bound_mode: TailMode = "integral"

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("tolerances must be positive")
        if self.max_terms < 1:
            raise DomainError("max_terms must be >= 1")
        if self.tail_bound_mode not in ("geometric", "integral"):
            raise DomainError(f"unknown tail_bound_mode {self.tail_bound_mode!r}")


@dataclass(frozen=True)
class SumResult:
    value: float
    tail_bound: float
    terms_used: int
    imag_residual: float = 0.0

    def __post_init__(self) -> None:
        if not self.tail_bound >= 0:
            raise ValueError("tail_bound must be non-negative")


# ---------------------------------------------------------------- pointwise


def _check_n(n: int) -> int:
    if isinstance(n, bool) or not float(n).is_integer() or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    return int(n)


def iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for non-negative integers."""
    if n < 2 or k == 1:
        return n
    g = int(round(n ** (1.0 / k)))
    while g**k > n:
        g -= 1
    while (g + 1) ** k <= n:
        g += 1
    return g


def _kth_power_divisors(n: int, k: int):
    for d in range(1, iroot(n, k) + 1):
        q = d**k
        if n % q == 0:
            yield d, n // q


def divisor_d(spec: DivisorSpec, n: int) -> float:
    n = _check_n(n)
    if spec.r >= 0:
        return float(sum(m**spec.r for _, m in _kth_power_divisors(n, spec.k)))
    return float(sum(Fraction(1, m ** (-spec.r)) for _, m in _kth_power_divisors(n, spec.k)))


def divisor_s(spec: DivisorSpec, n: int) -> float:
    n = _check_n(n)
    k, r = spec.k, spec.r
    if r <= 0:
        return float(sum(m ** (-r) * d ** (k - 1) for d, m in _kth_power_divisors(n, k)))
    return float(sum(Fraction(d ** (k - 1), m**r) for d, m in _kth_power_divisors(n, k)))


# ---------------------------------------------------------------- sieves


def _checked(arr: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(arr)):
        raise OverflowError("divisor sum exceeds the double range")
    return arr


def _sieve_full(kind: str, spec: DivisorSpec, n_max: int) -> np.ndarray:
    """Sieve including the unused slot 0, for internal callers."""
    n_max = _check_n(n_max)
    fn = kernels.sieve_d if kind == "d" else kernels.sieve_s
    return _checked(fn(spec.k, spec.r, n_max))


def sieve_d(spec: DivisorSpec, n_max: int) -> np.ndarray:
    """D_{k,r}(n) for n = 1..n_max (element i holds n = i + 1)."""
    return _sieve_full("d", spec, n_max)[1:]


def sieve_s(spec: DivisorSpec, n_max: int) -> np.ndarray:
    """S_{k,r}(n) for n = 1..n_max (element i holds n = i + 1)."""
    return _sieve_full("s", spec, n_max)[1:]


# ---------------------------------------------------------------- tail bounds


def _logsumexp(vals: list[float]) -> float:
    top = max(vals)
    if top == -math.inf:
        return top
    return top + math.log(math.fsum(math.exp(v - top) for v in vals))


def power_exp_tail(p: int, x: float, n: int, mode: TailMode = "integral") -> float:
    """Upper bound for sum_{m > n} m^p e^{-m x} (p >= 0 integer, x > 0).

    Returns inf when the bound is not applicable at this ``n``.
    """
    if mode == "integral":
        # the summand decreases for t >= p/x, so the sum is below the integral
        if n < p / x:
            return math.inf
        y = n * x
        if y == 0.0:
            return math.inf
        # Γ(p+1, y) = p! e^{-y} sum_i y^i / i!
        logs = [-y + i * math.log(y) - math.lgamma(i + 1) for i in range(p + 1)]
        return math.exp(math.lgamma(p + 1) + _logsumexp(logs) - (p + 1) * math.log(x))
    # geometric: consecutive-term ratios decrease in m
    ratio = ((n + 2) / (n + 1)) ** p * math.exp(-x)
    if ratio >= 1.0:
        return math.inf
    return math.exp(p * math.log(n + 1) - (n + 1) * x) / (1.0 - ratio)


def _smallest_cut(bound: Callable[[int], float], target: float, cap: int) -> int | None:
    """Smallest n <= cap with bound(n) <= target, assuming eventual monotone decay."""
    hi = 1
    while bound(hi) > target:
        if hi >= cap:
            return None
        hi = min(cap, hi * 2)
    lo = hi // 2
    # bound might be inf below p/x; bisect on the predicate only
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if bound(mid) <= target:
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------- Lambert sums


def lambert_sum(spec: DivisorSpec, x: float, policy: TruncationPolicy | None = None) -> SumResult:
    """sum_{n>=1} D_{k,r}(n) e^{-n x} with a certified truncation bound."""
    policy = policy or TruncationPolicy()
    x = float(x)
    if not x > 0 or not math.isfinite(x):
        raise DomainError("x must be positive and finite")
    p = 1 + max(spec.r, 0)  # D_{k,r}(n) <= n^{1+max(r,0)}

    def tail(n: int) -> float:
        return power_exp_tail(p, x, n, policy.tail_bound_mode)

    # lower bound on the (positive) value from a short prefix sets the achievable target
    probe = min(policy.max_terms, max(1, math.ceil((p + 10) / x)))
    coef = _sieve_full("d", spec, probe)
    lower = kernels.exp_weighted_sum(coef, x)
    target = max(policy.abs_tol, policy.rel_tol * lower)
    n_cut = _smallest_cut(tail, target, policy.max_terms)
    if n_cut is None:
        n_cut = policy.max_terms
        bound = tail(n_cut)
        raise ConvergenceError(
            f"lambert_sum needs more than {policy.max_terms} terms (tail {bound:.3e} > {target:.3e})"
        )
    coef = _sieve_full("d", spec, n_cut)
    value = kernels.exp_weighted_sum(coef, x)
    return SumResult(value=value, tail_bound=tail(n_cut), terms_used=n_cut)


def eulerian_numbers(r: int) -> list[int]:
    """Row r of the Eulerian triangle, A(r, 0..r-1) (empty for r = 0)."""
    row = [1]
    for n in range(2, r + 1):
        nxt = [0] * n
        for m in range(n):
            left = (n - m) * row[m - 1] if m >= 1 else 0
            right = (m + 1) * row[m] if m < len(row) else 0
            nxt[m] = left + right
        row = nxt
    return row if r >= 1 else []


def lambert_sum_derivative_form(
    spec: DivisorSpec, x: float, policy: TruncationPolicy | None = None
) -> SumResult:
    """sum_n (-1)^r n^{-kr} d^r/dx^r [1/(e^{n^k x} - 1)], closed-form derivative.

    With q = e^{-n^k x} each term equals sum_j A(r,j) q^{j+1} / (1-q)^{r+1}.
    """
    policy = policy or TruncationPolicy()
    if spec.r < 0:
        raise DomainError("derivative form needs r >= 0")
    x = float(x)
    if not x > 0:
        raise DomainError("x must be positive")
    k, r = spec.k, spec.r
    euler = np.array(eulerian_numbers(r), dtype=np.float64)
    log_scale = math.lgamma(r + 1) - (r + 2) * math.log(-math.expm1(-x))

    def tail(n: int) -> float:
        return math.exp(log_scale - float(n + 1) ** k * x)

    head = kernels.derivative_form_sum(k, r, x, 1, euler)
    target = max(policy.abs_tol, policy.rel_tol * head)
    n_cut = _smallest_cut(tail, target, policy.max_terms)
    if n_cut is None:
        raise ConvergenceError("derivative-form sum did not reach tolerance")
    value = kernels.derivative_form_sum(k, r, x, n_cut, euler)
    return SumResult(value=value, tail_bound=tail(n_cut), terms_used=n_cut)


# ---------------------------------------------------------------- Dirichlet series

Form = Literal["D", "S"]


def _zeta_factors(spec: DivisorSpec, form: Form) -> tuple[tuple[float, float], tuple[float, float]]:
    # the generating function is zeta(a1 + b1 w) zeta(a2 + b2 w)
    if form == "D":
        return (0.0, float(spec.k)), (-float(spec.r), 1.0)
    if form == "S":
        return (1.0 - spec.k, float(spec.k)), (float(spec.r), 1.0)
    raise DomainError(f"form must be 'D' or 'S', got {form!r}")


def _abscissa(spec: DivisorSpec, form: Form) -> float:
    if form == "D":
        return max(1.0 / spec.k, 1.0 + spec.r)
    return max(1.0, 1.0 - spec.r)


def dirichlet_partial(spec: DivisorSpec, s: float, n_max: int, form: Form = "D") -> float:
    """sum_{n<=N} coeff(n) n^{-s} for D_{k,r} (form 'D') or S_{k,r} (form 'S')."""
    s = float(s)
    if not s > _abscissa(spec, form):
        raise DomainError(f"s = {s} is outside the half-plane of absolute convergence")
    coef = _sieve_full("d" if form == "D" else "s", spec, n_max)[1:]
    n = np.arange(1, n_max + 1, dtype=np.float64)
    return float(np.sum(coef * np.exp(-s * np.log(n))))


def dirichlet_product(spec: DivisorSpec, s: float, form: Form = "D") -> float:
    """Closed form of the full Dirichlet series as a product of two zetas."""
    (a1, b1), (a2, b2) = _zeta_factors(spec, form)
    return zeta_real(a1 + b1 * s) * zeta_real(a2 + b2 * s)


def dirichlet_tail_estimate(spec: DivisorSpec, s: float, n_max: int, form: Form = "D") -> float:
    """Estimate of sum_{n>N} coeff(n) n^{-s}.

    Partial summation against the exact count A(N) plus the pole terms of the
    generating function in the summatory main term.  Poles at w <= 0 only
    contribute O(N^{-s} log N) and are dropped.
    """
    s = float(s)
    coef = _sieve_full("d" if form == "D" else "s", spec, n_max)
    count = float(np.sum(coef))
    (a1, b1), (a2, b2) = _zeta_factors(spec, form)
    w1, w2 = (1.0 - a1) / b1, (1.0 - a2) / b2
    big_n = float(n_max)
    log_n = math.log(big_n)
    total = -count * big_n**-s
    if abs(w1 - w2) < 1e-15:
        rho = w1
        if rho > 0:
            amp = 1.0 / (b1 * b2)
            lin = EULER_GAMMA * (1.0 / b1 + 1.0 / b2) - amp / rho
            alpha = s - rho
            decay = big_n**-alpha
            total += s / rho * (amp * decay * (alpha * log_n + 1.0) / alpha**2 + lin * decay / alpha)
    else:
        for rho, b_self, (a_o, b_o) in ((w1, b1, (a2, b2)), (w2, b2, (a1, b1))):
            if rho <= 0:
                continue
            res = zeta_real(a_o + b_o * rho) / b_self
            total += s * res * big_n ** (rho - s) / (rho * (s - rho))
    if w1 != 0.0 and w2 != 0.0 and a1 != 1.0 and a2 != 1.0:
        total += zeta_real(a1) * zeta_real(a2) * big_n**-s
    return total


__all__ = [
    "DivisorSpec",
    "TruncationPolicy",
    "SumResult",
    "divisor_d",
    "divisor_s",
    "sieve_d",
    "sieve_s",
    "lambert_sum",
    "lambert_sum_derivative_form",
    "eulerian_numbers",
    "dirichlet_partial",
    "dirichlet_product",
    "dirichlet_tail_estimate",
    "power_exp_tail",
    "iroot",
]
