"""Right-hand sides of the Lambert-series transformation formulas and the
LHS-vs-RHS verification engine.

For the series L_{k,r}(x) = sum_n D_{k,r}(n) e^{-nx} the right-hand side is a
sum of residues of Γ(s)ζ(ks)ζ(s-r)x^{-s} plus a dual series: either a
Meijer-G series over S_{k,r} (r != -1) or a logarithmic series (r = -1).
"""

from __future__ import annotations

import cmath
import enum
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Any, Mapping

import numpy as np

from . import kernels
from .arith import DivisorSpec, SumResult, TruncationPolicy, _sieve_full, lambert_sum
from .errors import ConvergenceError, DomainError
from .meijerg import (
    PolarArg,
    QuadraturePolicy,
    default_abscissa,
    eval_closed_progression,
    eval_mb_many,
    log_moment,
)
from .specfun import bernoulli, gamma, zeta_prime_neg_even, zeta_real

TWO_PI = 2.0 * math.pi

TERM_KEYS = (
    "residue_0",
    "residue_1_over_k",
    "residue_1_plus_r",
    "residue_R",
    "residue_log",
    "g_series",
)


class ParityClass(enum.Enum):
    EVEN_EVEN = "k even, r even"
    EVEN_ODD = "k even, r odd"
    EVEN_LOG = "k even, r = -1"
    ODD_ODD = "k odd, r odd"
    ODD_LOG = "k odd, r = -1"


UNSUPPORTED_MESSAGE = "unsupported parity class (k odd, r even: Case 4)"


@dataclass(frozen=True)
class IdentityCase:
    k: int
    r: int
    x: float

    def __post_init__(self) -> None:
        spec = DivisorSpec(self.k, self.r)
        object.__setattr__(self, "k", spec.k)
        object.__setattr__(self, "r", spec.r)
        x = float(self.x)
        if not (x > 0 and math.isfinite(x)):
            raise DomainError("x must be positive and finite")
        object.__setattr__(self, "x", x)

    @property
    def supported(self) -> bool:
        return not (self.k % 2 == 1 and self.r % 2 == 0)

    @property
    def parity(self) -> ParityClass:
        k_even, r_even = self.k % 2 == 0, self.r % 2 == 0
        if not k_even and r_even:
            raise DomainError(UNSUPPORTED_MESSAGE)
        if self.r == -1:
            return ParityClass.EVEN_LOG if k_even else ParityClass.ODD_LOG
        if k_even:
            return ParityClass.EVEN_EVEN if r_even else ParityClass.EVEN_ODD
        return ParityClass.ODD_ODD

    @property
    def divisor_spec(self) -> DivisorSpec:
        return DivisorSpec(self.k, self.r)


def j_range(k: int) -> range:
    """The double-primed index set -(k-1), -(k-3), ..., k-1."""
    return range(-(k - 1), k, 2)


def x_of_j(case: IdentityCase, n: int, j: int) -> PolarArg:
    """X(j) = (2π)^{k+1} n / (k^k x) · e^{-iπj/2} as modulus and angle."""
    k = case.k
    if abs(j) > k - 1 or (j - (k - 1)) % 2 != 0:
        raise DomainError(f"j = {j} is not in the index set for k = {k}")
    if n < 1:
        raise DomainError("n must be >= 1")
    return PolarArg(_x_modulus(case) * n, -math.pi * j / 2)


def _x_modulus(case: IdentityCase) -> float:
    k = case.k
    return math.exp((k + 1) * math.log(TWO_PI) - k * math.log(k) - math.log(case.x))


def g_b_params(case: IdentityCase) -> tuple[float, ...]:
    return (float(case.r),) + tuple(-m / case.k for m in range(1, case.k))


# ---------------------------------------------------------------- residues


def residue_0(case: IdentityCase) -> float:
    if case.r == -1:
        raise DomainError("residue at 0 is a double pole for r = -1; use residue_log")
    return -zeta_real(-case.r) / 2.0


def residue_1_over_k(case: IdentityCase) -> float:
    k, r, x = case.k, case.r, case.x
    if k == 1 and r == 0:
        raise DomainError("poles at 1/k and 1+r coincide")
    return gamma(1.0 / k) * zeta_real(1.0 / k - r) * x ** (-1.0 / k) / k


def residue_1_plus_r(case: IdentityCase) -> float:
    k, r, x = case.k, case.r, case.x
    if r == -1:
        raise DomainError("residue at 1+r is undefined for r = -1; use residue_log")
    if r >= 0:
        return math.factorial(r) * zeta_real(k * (1 + r)) * x ** (-(1 + r))
    m = -(1 + r)  # Γ has a pole at s = -m
    arg = k * (1 + r)
    if arg % 2 != 0:
        raise DomainError("k(1+r) must be even for the derivative closed form")
    sign = -1 if m % 2 else 1
    return sign / math.factorial(m) * k * zeta_prime_neg_even(arg) * x**m


def residue_log(case: IdentityCase) -> float:
    if case.r != -1:
        raise DomainError("residue_log applies only to r = -1")
    return 0.5 * (math.log(case.x) - case.k * math.log(TWO_PI))


def residue_R_coefficients(k: int, r: int) -> list[Fraction]:
    """Exact coefficients c_i with R = sum_i c_i (2π)^{-r} (x/2π)^{2i+1}."""
    if r >= 1:
        return []
    top = -(1 + r) // 2
    lead = Fraction(1 if ((1 + r) // 2) % 2 == 0 else -1, 2)
    out = []
    for i in range(top + 1):
        a = k * (2 * i + 1) + 1
        num = (-1) ** (i + 1) * bernoulli(a) * bernoulli(-2 * i - 1 - r)
        den = math.factorial(2 * i + 1) * a * math.factorial(-(2 * i + 1 + r))
        out.append(lead * num / den)
    return out


def residue_R_odd(case: IdentityCase) -> float:
    """Residues at the poles of Γ left over when k is odd (r odd)."""
    k, r, x = case.k, case.r, case.x
    if k % 2 == 0 or r % 2 == 0:
        raise DomainError("residue_R_odd needs k odd and r odd")
    coefs = residue_R_coefficients(k, r)
    base = TWO_PI ** (-r)
    return math.fsum(float(c) * base * (x / TWO_PI) ** (2 * i + 1) for i, c in enumerate(coefs))


# ---------------------------------------------------------------- dual series


def _upper_gamma_int(n: int, y: float) -> float:
    """Γ(n, y) for integer n >= 1."""
    if y <= 0:
        return math.gamma(n)
    logs = [-y + i * math.log(y) - math.lgamma(i + 1) for i in range(n)]
    top = max(logs)
    return math.exp(math.lgamma(n) + top) * math.fsum(math.exp(v - top) for v in logs)


def _stretched_exp_tail(a: float, k: int, m: int) -> float:
    """∫_m^∞ exp(-a t^{1/k}) dt, bounding sum_{n>m} exp(-a n^{1/k})."""
    return k * _upper_gamma_int(k, a * m ** (1.0 / k)) / a**k


def _smallest(pred, cap: int) -> int | None:
    hi = 1
    while not pred(hi):
        if hi >= cap:
            return None
        hi = min(cap, 2 * hi)
    lo = hi // 2
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class _Rep:
    j: int
    paired: bool
    weight: complex
    angle: float


def _representatives(case: IdentityCase) -> list[_Rep]:
    k, cls = case.k, case.parity
    reps = []
    for j in j_range(k):
        if j < 0:
            continue
        weight = 1.0 + 0j if cls is ParityClass.EVEN_EVEN else 1j ** (j % 4)
        angle = math.pi * j / 2 if cls is ParityClass.ODD_ODD else -math.pi * j / 2
        reps.append(_Rep(j=j, paired=j > 0, weight=weight, angle=angle))
    return reps


def g_series_prefactor(case: IdentityCase) -> float:
    k, r, x = case.k, case.r, case.x
    cls = case.parity
    if cls is ParityClass.EVEN_EVEN:
        exponent = (k + r - 2) // 2
    elif cls in (ParityClass.EVEN_ODD, ParityClass.ODD_ODD):
        exponent = (2 * k + r - 1) // 2
    else:
        raise DomainError("no Meijer-G series for r = -1")
    sign = -1.0 if exponent % 2 else 1.0
    log_mag = (k + 1 - 2 * r) / 2 * math.log(TWO_PI) - math.log(x) - (2 * k - 1) / 2 * math.log(k)
    return sign * math.exp(log_mag)


class _GTail:
    """Certified bound for sum_{n>N} |S(n) G(X_1 n)| at one angle.

    |G(z)| <= M(c)|z|^{-c} for every admissible c and |S(n)| <= n^{p_S}, so the
    tail is at most M(c) X_1^{-c} N^{p_S+1-c}/(c-p_S-1); minimised over a grid of c.
    """

    def __init__(self, b: tuple[float, ...], angle: float, x1: float, p_s: int):
        lo = max(p_s + 1.5, -min(b) + 0.25)
        self.grid = [lo + step for step in (0.0, 0.5, 1, 2, 4, 8, 16, 32, 64, 128, 256, 512)]
        self.logm = [log_moment(b, angle, c) for c in self.grid]
        self.log_x1 = math.log(x1)
        self.p_s = p_s

    def __call__(self, n: int) -> float:
        ln = math.log(n)
        best = math.inf
        for c, lm in zip(self.grid, self.logm):
            e = self.p_s + 1 - c
            val = lm - c * self.log_x1 + e * ln - math.log(-e)
            best = min(best, val)
        return math.exp(best) if best < 700 else math.inf


def _g_values(
    b: tuple[float, ...],
    k: int,
    x1: float,
    angle: float,
    n_max: int,
    qpolicy: QuadraturePolicy,
    closed_base: float | None,
) -> tuple[np.ndarray, np.ndarray]:
    """G(X_1 n) for n = 1..n_max plus a per-n quadrature error estimate."""
    n = np.arange(1, n_max + 1, dtype=np.float64)
    moduli = x1 * n
    if closed_base is not None:
        vals = np.array([eval_closed_progression(closed_base, k, PolarArg(m, angle)) for m in moduli])
        return vals, np.zeros(n_max)
    vals = np.empty(n_max, dtype=np.complex128)
    err = np.empty(n_max)
    c0 = default_abscissa(b) if qpolicy.abscissa_c is None else qpolicy.abscissa_c
    # move the line towards the saddle Re z^{1/k} to avoid cancellation at large |z|
    saddle = moduli ** (1.0 / k) * math.cos(angle / k)
    c_of_n = np.maximum(c0, np.floor(2.0 * saddle) / 2.0)
    start = 0
    while start < n_max:
        c = float(c_of_n[start])
        stop = start
        while stop < n_max and c_of_n[stop] == c:
            stop += 1
        t_star = abs(float(moduli[stop - 1]) ** (1.0 / k) * math.sin(angle / k))
        pol = QuadraturePolicy(
            abscissa_c=c,
            height_T=max(qpolicy.height_T, 4 * t_star + 50),
            step_h=qpolicy.step_h,
            tol=qpolicy.tol,
            adaptive=qpolicy.adaptive,
            initial_T=max(qpolicy.initial_T, 1.25 * t_star + 10),
        )
        block, tail_rel = eval_mb_many(b, moduli[start:stop], angle, pol)
        vals[start:stop] = block
        err[start:stop] = tail_rel * moduli[start:stop] ** (-c)
        start = stop
    return vals, err


def _closed_base(case: IdentityCase) -> float | None:
    # b = (r, -1/k, ..., -(k-1)/k) is the progression starting at -(k-1)/k iff r = 0
    return -(case.k - 1) / case.k if case.r == 0 else None


def rhs_g_series(
    case: IdentityCase,
    policy: TruncationPolicy | None = None,
    qpolicy: QuadraturePolicy | None = None,
    *,
    scale: float = 1.0,
    use_closed_form: bool = True,
) -> SumResult:
    """The S_{k,r}-weighted Meijer-G dual series, including its prefactor.

    ``scale`` sets the magnitude against which ``policy.rel_tol`` is measured.
    """
    policy = policy or TruncationPolicy()
    qpolicy = qpolicy or QuadraturePolicy()
    cls = case.parity
    if cls in (ParityClass.EVEN_LOG, ParityClass.ODD_LOG):
        raise DomainError("r = -1 uses rhs_log_series")
    k, r = case.k, case.r
    b = g_b_params(case)
    pref = g_series_prefactor(case)
    x1 = _x_modulus(case)
    p_s = 1 + max(-r, 0)
    reps = _representatives(case)
    target = max(policy.abs_tol, policy.rel_tol * abs(scale))
    per_rep = target / (len(reps) * abs(pref))
    closed = _closed_base(case) if use_closed_form else None

    cuts = []
    for rep in reps:
        bound = _GTail(b, rep.angle, x1, p_s)
        mult = 2.0 if rep.paired else 1.0
        n_cut = _smallest(lambda n: mult * bound(n) <= per_rep, policy.max_terms)
        if n_cut is None:
            raise ConvergenceError(f"G-series for {case} needs more than {policy.max_terms} terms")
        cuts.append((n_cut, mult * bound(n_cut)))
    n_all = max(n for n, _ in cuts)
    s_coef = _sieve_full("s", case.divisor_spec, n_all)[1:]

    parts: list[float] = []
    tail_total = 0.0
    imag_track = 0.0
    for rep, (n_cut, tail) in zip(reps, cuts):
        vals, err = _g_values(b, k, x1, rep.angle, n_cut, qpolicy, closed)
        weighted = s_coef[:n_cut] * vals
        acc = complex(np.sum(weighted))
        quad_err = float(np.sum(np.abs(s_coef[:n_cut]) * err))
        if rep.paired:
            parts.append(2.0 * (rep.weight * acc).real)
            mult = 2.0
            # realness check: evaluate the -j partner independently on a prefix
            probe = min(n_cut, 16)
            mirror, _ = _g_values(b, k, x1, -rep.angle, probe, qpolicy, closed)
            w_m = rep.weight.conjugate()
            both = rep.weight * np.sum(weighted[:probe]) + w_m * np.sum(s_coef[:probe] * mirror)
            imag_track += abs(complex(both).imag)
        else:
            parts.append((rep.weight * acc).real)
            mult = 1.0
            imag_track += abs((rep.weight * acc).imag)
        tail_total += tail + mult * quad_err
    value = pref * math.fsum(parts)
    return SumResult(
        value=value,
        tail_bound=abs(pref) * tail_total,
        terms_used=n_all,
        imag_residual=abs(pref) * imag_track,
    )


def rhs_log_series(case: IdentityCase, policy: TruncationPolicy | None = None, *, scale: float = 1.0) -> SumResult:
    """Logarithmic dual series for r = -1 (without the residue terms)."""
    policy = policy or TruncationPolicy()
    cls = case.parity
    if cls not in (ParityClass.EVEN_LOG, ParityClass.ODD_LOG):
        raise DomainError("rhs_log_series applies only to r = -1")
    k, x = case.k, case.x
    amp = TWO_PI ** (1.0 + 1.0 / k) * x ** (-1.0 / k)
    # k even: (-1)^k e^{iπj} = -1 for odd j, phases e^{-iπj/2k};  k odd: -1, phases e^{+iπj/2k}
    direction = -1.0 if cls is ParityClass.EVEN_LOG else 1.0
    js = [j for j in j_range(k) if j >= 0]
    target = max(policy.abs_tol, policy.rel_tol * abs(scale)) / len(js)
    parts = []
    tail_total = 0.0
    imag_track = 0.0
    terms = 0
    for j in js:
        phase = cmath.exp(direction * 1j * math.pi * j / (2 * k))
        w = phase * amp
        a = w.real
        mult = 2.0 if j > 0 else 1.0
        damp = 1.0 / (1.0 - math.exp(-a))

        def tail(m: int, a=a, mult=mult, damp=damp) -> float:
            return mult * damp * _stretched_exp_tail(a, k, m)

        m_cut = _smallest(lambda m: tail(m) <= target, policy.max_terms)
        if m_cut is None:
            raise ConvergenceError("log series did not reach tolerance")
        acc = complex(kernels.log1mexp_series(w, k, m_cut))
        if j > 0:
            mirror = complex(kernels.log1mexp_series(w.conjugate(), k, min(m_cut, 16)))
            head = complex(kernels.log1mexp_series(w, k, min(m_cut, 16)))
            imag_track += abs((head + mirror).imag)
            parts.append(-2.0 * acc.real)
        else:
            imag_track += abs(acc.imag)
            parts.append(-acc.real)
        tail_total += tail(m_cut)
        terms = max(terms, m_cut)
    return SumResult(value=math.fsum(parts), tail_bound=tail_total, terms_used=terms, imag_residual=imag_track)


# ---------------------------------------------------------------- verification


@dataclass(frozen=True)
class VerificationReport:
    case: IdentityCase
    lhs: SumResult
    rhs_total: float
    rhs_terms: Mapping[str, float]
    abs_residual: float
    rel_residual: float
    rhs_tail_bound: float = 0.0
    effort: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "rhs_terms", MappingProxyType(dict(self.rhs_terms)))
        object.__setattr__(self, "effort", MappingProxyType(dict(self.effort)))

    def to_dict(self) -> dict[str, Any]:
        return {
            "case": {"k": self.case.k, "r": self.case.r, "x": self.case.x},
            "lhs": {
                "value": self.lhs.value,
                "tail_bound": self.lhs.tail_bound,
                "terms_used": self.lhs.terms_used,
                "imag_residual": self.lhs.imag_residual,
            },
            "rhs_total": self.rhs_total,
            "rhs_terms": dict(self.rhs_terms),
            "rhs_tail_bound": self.rhs_tail_bound,
            "residual": {"abs": self.abs_residual, "rel": self.rel_residual},
            "effort": dict(self.effort),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "VerificationReport":
        c = data["case"]
        lhs = data["lhs"]
        return cls(
            case=IdentityCase(c["k"], c["r"], c["x"]),
            lhs=SumResult(lhs["value"], lhs["tail_bound"], lhs["terms_used"], lhs.get("imag_residual", 0.0)),
            rhs_total=data["rhs_total"],
            rhs_terms=data["rhs_terms"],
            abs_residual=data["residual"]["abs"],
            rel_residual=data["residual"]["rel"],
            rhs_tail_bound=data.get("rhs_tail_bound", 0.0),
            effort=data.get("effort", {}),
        )


def make_report(
    case: IdentityCase,
    lhs: SumResult,
    terms: Mapping[str, float],
    rhs_tail: float = 0.0,
    effort: Mapping[str, float] | None = None,
) -> VerificationReport:
    total = math.fsum(terms.values())
    resid = abs(lhs.value - total)
    denom = max(abs(lhs.value), abs(total))
    return VerificationReport(
        case=case,
        lhs=lhs,
        rhs_total=total,
        rhs_terms=terms,
        abs_residual=resid,
        rel_residual=resid / denom if denom > 0 else resid,
        rhs_tail_bound=rhs_tail,
        effort=effort or {},
    )


def rhs_terms(
    case: IdentityCase,
    policy: TruncationPolicy | None = None,
    qpolicy: QuadraturePolicy | None = None,
    *,
    scale: float = 1.0,
) -> tuple[dict[str, float], SumResult]:
    """All RHS pieces of the applicable theorem, keyed by TERM_KEYS."""
    cls = case.parity
    terms = dict.fromkeys(TERM_KEYS, 0.0)
    terms["residue_1_over_k"] = residue_1_over_k(case)
    if case.r == -1:
        terms["residue_log"] = residue_log(case)
        if cls is ParityClass.ODD_LOG:
            terms["residue_R"] = residue_R_odd(case)
        series = rhs_log_series(case, policy, scale=scale)
    else:
        terms["residue_0"] = residue_0(case)
        terms["residue_1_plus_r"] = residue_1_plus_r(case)
        if cls is ParityClass.ODD_ODD:
            terms["residue_R"] = residue_R_odd(case)
        series = rhs_g_series(case, policy, qpolicy, scale=scale)
    terms["g_series"] = series.value
    return terms, series


def verify(
    case: IdentityCase,
    policy: TruncationPolicy | None = None,
    qpolicy: QuadraturePolicy | None = None,
) -> VerificationReport:
    """Evaluate both sides of the applicable identity and report the residual."""
    case.parity  # rejects the unsupported class before any work
    started = time.perf_counter()
    lhs = lambert_sum(case.divisor_spec, case.x, policy)
    terms, series = rhs_terms(case, policy, qpolicy, scale=abs(lhs.value))
    elapsed = (time.perf_counter() - started) * 1e3
    effort = {"lhs_terms": lhs.terms_used, "rhs_terms": series.terms_used, "ms": elapsed,
              "imag_residual": series.imag_residual}
    return make_report(case, lhs, terms, series.tail_bound, effort)


__all__ = [
    "TERM_KEYS",
    "ParityClass",
    "IdentityCase",
    "VerificationReport",
    "j_range",
    "x_of_j",
    "g_b_params",
    "residue_0",
    "residue_1_over_k",
    "residue_1_plus_r",
    "residue_log",
    "residue_R_odd",
    "residue_R_coefficients",
    "g_series_prefactor",
    "rhs_g_series",
    "rhs_log_series",
    "rhs_terms",
    "make_report",
    "verify",
]
