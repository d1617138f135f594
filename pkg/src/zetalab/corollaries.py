"""Special cases of the transformation formulas: closed identities and the
zeta values they can be solved for.

Each ``*_identity`` / ``*_check`` returns a VerificationReport whose LHS is
summed directly and whose RHS terms are keyed by descriptive names.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import kernels
from .arith import (
    DivisorSpec,
    SumResult,
    TruncationPolicy,
    lambert_sum,
    lambert_sum_derivative_form,
)
from .errors import ConvergenceError, DomainError
from .identities import IdentityCase, VerificationReport, make_report
from .specfun import bernoulli, gamma, zeta_real

PI = math.pi
TWO_PI = 2.0 * math.pi
_SQRT2P1 = math.sqrt(2.0) + 1.0


def _positive(name: str, v: float) -> float:
    v = float(v)
    if not (v > 0 and math.isfinite(v)):
        raise DomainError(f"{name} must be positive and finite")
    return v


def _positive_int(name: str, v: int) -> int:
    if isinstance(v, bool) or not float(v).is_integer() or int(v) < 1:
        raise DomainError(f"{name} must be an integer >= 1")
    return int(v)


def _combine(value: float, *parts: SumResult) -> SumResult:
    return SumResult(
        value=value,
        tail_bound=sum(p.tail_bound for p in parts),
        terms_used=max(p.terms_used for p in parts),
    )


def _stretched_cut(beta: float, log_target: float, max_terms: int) -> int:
    """Smallest M with sqrt(beta*M) >= log_target (at least 1)."""
    if log_target <= 0:
        return 1
    m = math.ceil(log_target * log_target / beta)
    if m > max_terms:
        raise ConvergenceError(f"trigonometric series needs {m} > {max_terms} terms")
    return max(1, m)


# ---------------------------------------------------------------- zeta(1/2)


def ramanujan_half_series(beta: float, policy: TruncationPolicy | None = None) -> SumResult:
    """sum_m (cos y - sin y - e^{-y}) / (sqrt(m) (cosh y - cos y)), y = sqrt(m beta)."""
    policy = policy or TruncationPolicy()
    beta = _positive("beta", beta)
    e1 = math.exp(-math.sqrt(beta))
    const = 2.0 * _SQRT2P1 / (1.0 - e1) ** 2
    # sum_{m>M} e^{-sqrt(beta m)}/sqrt(m) <= 2 e^{-sqrt(beta M)} / sqrt(beta)
    lead = const * e1
    target = max(policy.abs_tol, policy.rel_tol * lead)
    log_target = math.log(2.0 * const / (math.sqrt(beta) * target))
    m_cut = _stretched_cut(beta, log_target, policy.max_terms)
    m = np.arange(1, m_cut + 1, dtype=np.float64)
    y = np.sqrt(m * beta)
    e = np.exp(-y)
    c, s = np.cos(y), np.sin(y)
    # numerator and denominator multiplied by 2e^{-y}
    f = 2.0 * e * (c - s - e) / (np.sqrt(m) * (1.0 + e * e - 2.0 * e * c))
    tail = 2.0 * const * math.exp(-math.sqrt(beta * m_cut)) / math.sqrt(beta)
    return SumResult(value=math.fsum(f), tail_bound=tail, terms_used=m_cut)


def zeta_half_via_ramanujan(alpha: float, policy: TruncationPolicy | None = None) -> float:
    """ζ(1/2) from the k = 2, r = 0 identity at α, with β = 4π³/α."""
    alpha = _positive("alpha", alpha)
    beta = 4.0 * PI**3 / alpha
    lhs = lambert_sum_derivative_form(DivisorSpec(2, 0), alpha, policy)
    trig = ramanujan_half_series(beta, policy)
    bracket = lhs.value - 0.25 - PI**2 / (6.0 * alpha)
    return 4.0 * PI / math.sqrt(beta) * bracket - trig.value


# ---------------------------------------------------------------- Wigert / zeta(1/k)


def _wigert_parts(k: int, x: float, policy: TruncationPolicy) -> tuple[dict[str, float], int]:
    if k < 2 or k % 2:
        raise DomainError("Wigert formula needs an even k >= 2")
    x = _positive("x", x)
    root = (TWO_PI / x) ** (1.0 / k)
    big_w = TWO_PI * root
    pref = (-1) ** (k // 2 - 1) * root / k
    terms = {
        "pole_term": zeta_real(k) / x,
        "residue_1_over_k": gamma(1.0 / k) * zeta_real(1.0 / k) * x ** (-1.0 / k) / k,
        "constant": 0.25,
    }
    series = []
    n_used = 0
    for j in range(k // 2):
        psi = PI * (2 * j + 1) / (2 * k)
        phi = PI * (2 * j + 1) * (k - 1) / (2 * k)
        w = big_w * complex(math.cos(psi), -math.sin(psi))
        a = w.real
        # sum_{n>N} |n^{1/k-1}/(e^{w n^{1/k}}-1)| <= k e^{-a N^{1/k}} / (a (1 - e^{-a}))
        const = k / (a * -math.expm1(-a))
        weight = 2.0 * abs(pref)
        target = max(policy.abs_tol, policy.rel_tol * 0.25) / (weight * (k // 2))
        log_t = math.log(const / target)
        n_cut = max(1, math.ceil((log_t / a) ** k)) if log_t > 0 else 1
        if n_cut > policy.max_terms:
            raise ConvergenceError(f"L-bar series needs {n_cut} > {policy.max_terms} terms")
        lbar = kernels.lbar_series(w, k, n_cut)
        series.append(2.0 * pref * (complex(math.cos(phi), math.sin(phi)) * lbar).real)
        n_used = max(n_used, n_cut)
    terms["lbar_series"] = math.fsum(series)
    return terms, n_used


def wigert_rhs(k: int, x: float, policy: TruncationPolicy | None = None) -> float:
    """RHS of the Wigert-type formula for sum_n 1/(e^{n^k x} - 1), k even."""
    terms, _ = _wigert_parts(int(k), x, policy or TruncationPolicy())
    return math.fsum(terms.values())


def wigert_identity(k: int, x: float, policy: TruncationPolicy | None = None) -> VerificationReport:
    policy = policy or TruncationPolicy()
    k = int(k)
    terms, n_used = _wigert_parts(k, x, policy)
    lhs = lambert_sum_derivative_form(DivisorSpec(k, 0), x, policy)
    return make_report(IdentityCase(k, 0, x), lhs, terms, effort={"rhs_terms": n_used})


def zeta_one_over_k_via_wigert(k: int, x: float = 1.0, policy: TruncationPolicy | None = None) -> float:
    """Solve the Wigert formula for ζ(1/k)."""
    policy = policy or TruncationPolicy()
    k = int(k)
    terms, _ = _wigert_parts(k, x, policy)
    lhs = lambert_sum_derivative_form(DivisorSpec(k, 0), x, policy)
    rest = lhs.value - terms["pole_term"] - terms["constant"] - terms["lbar_series"]
    return rest * k * x ** (1.0 / k) / gamma(1.0 / k)


# ---------------------------------------------------------------- zeta(-1/2)


def minus_half_series(beta: float, policy: TruncationPolicy | None = None) -> SumResult:
    """sum_m (1/m) {A_m + B_m}, the bracketed trig/hyperbolic series.

    A_m = (cos y + sin y - e^{-y}) / (y (cosh y - cos y))
    B_m = 2 sin y sinh y / ((cos y cosh y - 1)^2 + (sin y sinh y)^2),  y = sqrt(m beta)
    """
    policy = policy or TruncationPolicy()
    beta = _positive("beta", beta)
    y1 = math.sqrt(beta)
    e1 = math.exp(-y1)
    # |A_m + B_m| <= const * e^{-y}; sum_{m>M} e^{-y}/m <= 2 e^{-sqrt(beta M)}/sqrt(beta M)
    const = 2.0 * _SQRT2P1 / (y1 * (1.0 - e1) ** 2) + 4.0 / (1.0 - e1) ** 4
    target = max(policy.abs_tol, policy.rel_tol * const * e1)
    m_cut = 1
    while 2.0 * const * math.exp(-math.sqrt(beta * m_cut)) / math.sqrt(beta * m_cut) > target:
        m_cut *= 2
        if m_cut > policy.max_terms:
            raise ConvergenceError("zeta(-1/2) series did not reach tolerance")
    m = np.arange(1, m_cut + 1, dtype=np.float64)
    y = np.sqrt(m * beta)
    e = np.exp(-y)
    c, s = np.cos(y), np.sin(y)
    a_m = 2.0 * e * (c + s - e) / (y * (1.0 + e * e - 2.0 * e * c))
    # both parts of B_m scaled by 4 e^{-2y}
    b_m = 4.0 * e * s * (1.0 - e * e) / ((c * (1.0 + e * e) - 2.0 * e) ** 2 + (s * (1.0 - e * e)) ** 2)
    tail = 2.0 * const * math.exp(-math.sqrt(beta * m_cut)) / math.sqrt(beta * m_cut)
    return SumResult(value=math.fsum((a_m + b_m) / m), tail_bound=tail, terms_used=m_cut)


def _minus_half_pieces(alpha: float, policy: TruncationPolicy) -> tuple[SumResult, SumResult, float]:
    alpha = _positive("alpha", alpha)
    beta = 4.0 * PI**3 / alpha
    # sum_n n^{-2} d/dα 1/(1 - e^{n²α}) = sum_n e^{n²α}/(e^{n²α} - 1)^2
    lhs = lambert_sum_derivative_form(DivisorSpec(2, 1), alpha, policy)
    series = minus_half_series(beta, policy)
    return lhs, series, beta


def zeta_minus_half_identity(alpha: float, policy: TruncationPolicy | None = None) -> VerificationReport:
    policy = policy or TruncationPolicy()
    lhs, series, beta = _minus_half_pieces(alpha, policy)
    alpha = float(alpha)
    terms = {
        "constant": 1.0 / 24.0,
        "zeta_term": math.sqrt(beta) / (4.0 * PI) * zeta_real(-0.5),
        "pole_term": PI**4 / (90.0 * alpha**2),
        "trig_series": -PI / (4.0 * alpha) * series.value,
    }
    tail = PI / (4.0 * alpha) * series.tail_bound
    return make_report(IdentityCase(2, 1, alpha), lhs, terms, tail, {"rhs_terms": series.terms_used})


def solve_zeta_minus_half(alpha: float, policy: TruncationPolicy | None = None) -> float:
    """ζ(-1/2) isolated from the k = 2, r = 1 identity."""
    lhs, series, beta = _minus_half_pieces(alpha, policy or TruncationPolicy())
    alpha = float(alpha)
    rest = lhs.value - 1.0 / 24.0 - PI**4 / (90.0 * alpha**2) + PI / (4.0 * alpha) * series.value
    return 4.0 * PI / math.sqrt(beta) * rest


# ---------------------------------------------------------------- odd zeta values


def odd_zeta_bernoulli_sum(m: int, x: float) -> float:
    """(1/2) sum_{i=0}^{m+1} (-1)^{i+1} B_{2i} B_{2m+2-2i} x^{2m+1} (2π/x)^{2i} / ((2i)! (2m+2-2i)!)."""
    out = []
    for i in range(m + 2):
        q = Fraction((-1) ** (i + 1)) * bernoulli(2 * i) * bernoulli(2 * m + 2 - 2 * i)
        q /= math.factorial(2 * i) * math.factorial(2 * m + 2 - 2 * i)
        if q:
            out.append(float(q) * x ** (2 * m + 1 - 2 * i) * TWO_PI ** (2 * i))
    return 0.5 * math.fsum(out)


def _odd_pieces(m: int, x: float, policy: TruncationPolicy):
    m = _positive_int("m", m)
    x = _positive("x", x)
    spec = DivisorSpec(1, -(2 * m + 1))
    direct = lambert_sum(spec, x, policy)
    dual = lambert_sum(spec, 4.0 * PI**2 / x, policy)
    scale = (-1) ** m * (x / TWO_PI) ** (2 * m)
    return m, x, direct, dual, scale


def ramanujan_odd_zeta_check(m: int, x: float, policy: TruncationPolicy | None = None) -> VerificationReport:
    """Ramanujan's formula for ζ(2m+1), both sides evaluated independently."""
    policy = policy or TruncationPolicy()
    m, x, direct, dual, scale = _odd_pieces(m, x, policy)
    z = zeta_real(2 * m + 1)
    lhs = _combine(direct.value + 0.5 * z, direct)
    terms = {
        "dual_zeta": scale * 0.5 * z,
        "dual_series": scale * dual.value,
        "bernoulli_sum": odd_zeta_bernoulli_sum(m, x),
    }
    return make_report(
        IdentityCase(1, -(2 * m + 1), x), lhs, terms, abs(scale) * dual.tail_bound, {"rhs_terms": dual.terms_used}
    )


def default_odd_zeta_x(m: int) -> float:
    # at x = 2π the ζ coefficient 1/2 - (-1)^m/2 vanishes for even m
    return TWO_PI if m % 2 else PI


def solve_odd_zeta(m: int, x: float | None = None, policy: TruncationPolicy | None = None) -> float:
    """ζ(2m+1) isolated from Ramanujan's formula."""
    policy = policy or TruncationPolicy()
    m = _positive_int("m", m)
    x = default_odd_zeta_x(m) if x is None else x
    m, x, direct, dual, scale = _odd_pieces(m, x, policy)
    coef = 0.5 * (1.0 - scale)
    if abs(coef) < 1e-8:
        raise DomainError("ζ(2m+1) drops out of the formula at this x")
    return (scale * dual.value + odd_zeta_bernoulli_sum(m, x) - direct.value) / coef


def odd_negative_residues(k: int, m: int, x: float) -> dict[str, float]:
    """Residue terms of the k odd, r = -(2m+1) identity, closed forms in Bernoulli numbers."""
    k = _positive_int("k", k)
    m = _positive_int("m", m)
    if k % 2 == 0:
        raise DomainError("k must be odd")
    x = _positive("x", x)
    r = -(2 * m + 1)
    sign = (-1) ** m
    zeta_term = sign * 0.5 * k * math.exp(
        math.lgamma(2 * k * m + 1) - math.lgamma(2 * m + 1) - 2 * m * k * math.log(TWO_PI)
    ) * zeta_real(2 * k * m + 1) * x ** (2 * m)
    bern = []
    for i in range(m + 1):
        q = Fraction((-1) ** (i + 1)) * bernoulli(k * (2 * i + 1) + 1) * bernoulli(2 * m - 2 * i)
        q /= math.factorial(2 * i + 1) * (k * (2 * i + 1) + 1) * math.factorial(2 * m - 2 * i)
        if q:
            bern.append(float(q) * (x / TWO_PI) ** (2 * i + 1))
    return {
        "residue_0": -0.5 * zeta_real(2 * m + 1),
        "residue_1_over_k": gamma(1.0 / k) * zeta_real(1.0 / k - r) * x ** (-1.0 / k) / k,
        "residue_1_plus_r": zeta_term,
        "residue_R": sign * 0.5 * TWO_PI ** (2 * m + 1) * math.fsum(bern),
    }


# ---------------------------------------------------------------- alpha*beta = pi^2


def _dual(alpha: float) -> tuple[float, float]:
    alpha = _positive("alpha", alpha)
    return alpha, PI**2 / alpha


def eisenstein_identity(m: int, alpha: float, policy: TruncationPolicy | None = None) -> VerificationReport:
    """α^{m+1} Σ n^{2m+1}/(e^{2nα}-1) - (-β)^{m+1} Σ n^{2m+1}/(e^{2nβ}-1) against its Bernoulli value."""
    policy = policy or TruncationPolicy()
    m = _positive_int("m", m)
    alpha, beta = _dual(alpha)
    spec = DivisorSpec(1, 2 * m + 1)
    sa = lambert_sum(spec, 2.0 * alpha, policy)
    sb = lambert_sum(spec, 2.0 * beta, policy)
    ca, cb = alpha ** (m + 1), (-beta) ** (m + 1)
    lhs = SumResult(
        value=ca * sa.value - cb * sb.value,
        tail_bound=ca * sa.tail_bound + abs(cb) * sb.tail_bound,
        terms_used=max(sa.terms_used, sb.terms_used),
    )
    b = float(bernoulli(2 * m + 2) / (4 * m + 4))
    terms = {"alpha_part": ca * b, "beta_part": -cb * b}
    return make_report(IdentityCase(1, 2 * m + 1, 2.0 * alpha), lhs, terms)


def dedekind_identity(
    alpha: float, policy: TruncationPolicy | None = None, *, printed: bool = False
) -> VerificationReport:
    """Transformation law of log η: Σ 1/(n(e^{2nα}-1)) - Σ 1/(n(e^{2nβ}-1)).

    The RHS is (β-α)/12 + (1/4) log(α/β).  ``printed=True`` flips the sign of
    the log term, reproducing the commonly misprinted variant (which fails
    away from α = β).
    """
    policy = policy or TruncationPolicy()
    alpha, beta = _dual(alpha)
    spec = DivisorSpec(1, -1)
    sa = lambert_sum(spec, 2.0 * alpha, policy)
    sb = lambert_sum(spec, 2.0 * beta, policy)
    lhs = SumResult(sa.value - sb.value, sa.tail_bound + sb.tail_bound, max(sa.terms_used, sb.terms_used))
    terms = {"linear": (beta - alpha) / 12.0, "log": (-0.25 if printed else 0.25) * math.log(alpha / beta)}
    return make_report(IdentityCase(1, -1, 2.0 * alpha), lhs, terms)


def schlomilch_identity(
    alpha: float, policy: TruncationPolicy | None = None, *, printed: bool = False
) -> VerificationReport:
    """α Σ n/(e^{2nα}-1) + β Σ n/(e^{2nβ}-1) = (α+β)/24 - 1/4.

    ``printed=True`` uses -1/(4α) for the constant instead; that variant only
    holds at α = 1.
    """
    policy = policy or TruncationPolicy()
    alpha, beta = _dual(alpha)
    spec = DivisorSpec(1, 1)
    sa = lambert_sum(spec, 2.0 * alpha, policy)
    sb = lambert_sum(spec, 2.0 * beta, policy)
    lhs = SumResult(
        alpha * sa.value + beta * sb.value,
        alpha * sa.tail_bound + beta * sb.tail_bound,
        max(sa.terms_used, sb.terms_used),
    )
    terms = {"linear": (alpha + beta) / 24.0, "constant": -0.25 / alpha if printed else -0.25}
    return make_report(IdentityCase(1, 1, 2.0 * alpha), lhs, terms)


__all__ = [
    "ramanujan_half_series",
    "zeta_half_via_ramanujan",
    "wigert_rhs",
    "wigert_identity",
    "zeta_one_over_k_via_wigert",
    "minus_half_series",
    "zeta_minus_half_identity",
    "solve_zeta_minus_half",
    "odd_zeta_bernoulli_sum",
    "ramanujan_odd_zeta_check",
    "default_odd_zeta_x",
    "solve_odd_zeta",
    "odd_negative_residues",
    "eisenstein_identity",
    "dedekind_identity",
    "schlomilch_identity",
]
