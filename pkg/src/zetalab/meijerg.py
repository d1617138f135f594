"""Meijer G^{k,0}_{0,k}(z | b_1..b_k) by Mellin-Barnes quadrature.

    G(z) = (1/2πi) ∫_{(c)} Π_j Γ(s + b_j) z^{-s} ds

The argument is carried as modulus plus an explicit angle, so angles beyond
π (which the identity RHS needs for k >= 4) are representable.  On the line
s = c + iT the integrand becomes Π Γ(c + b_j + iT) |z|^{-c-iT} e^{θT - icθ}.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .errors import ConvergenceError, DomainError


@dataclass(frozen=True)
class PolarArg:
    """z = modulus * exp(i * angle) with the angle kept verbatim."""

    modulus: float
    angle: float = 0.0

    def __post_init__(self) -> None:
        if not (self.modulus > 0 and math.isfinite(self.modulus)):
            raise DomainError("modulus must be positive and finite")
        if not math.isfinite(self.angle):
            raise DomainError("angle must be finite")

    @classmethod
    def from_complex(cls, z: complex) -> "PolarArg":
        z = complex(z)
        return cls(abs(z), cmath.phase(z))

    @property
    def log(self) -> complex:
        return complex(math.log(self.modulus), self.angle)

    def conjugate(self) -> "PolarArg":
        return PolarArg(self.modulus, -self.angle)

    def to_complex(self) -> complex:
        return cmath.rect(self.modulus, self.angle)


def as_polar(z: "PolarArg | complex | float") -> PolarArg:
    return z if isinstance(z, PolarArg) else PolarArg.from_complex(z)


@dataclass(frozen=True)
class GSpec:
    order_k: int
    b_params: tuple[float, ...]
    argument: PolarArg

    def __post_init__(self) -> None:
        if self.order_k < 1:
            raise DomainError("order_k must be >= 1")
        b = tuple(float(v) for v in self.b_params)
        if len(b) != self.order_k:
            raise DomainError(f"expected {self.order_k} b-parameters, got {len(b)}")
        object.__setattr__(self, "b_params", b)
        object.__setattr__(self, "argument", as_polar(self.argument))
        if abs(self.argument.angle) >= self.order_k * math.pi / 2:
            raise DomainError("|arg z| must be below k*pi/2")


@dataclass(frozen=True)
class QuadraturePolicy:
    """Trapezoid on Re s = c.

    ``height_T`` caps the truncation height; with ``adaptive`` set the height
    starts at ``initial_T`` and grows by 1.5x until the tail estimate is
    below tol/10.  Without it exactly ``height_T`` is used.
    """

    abscissa_c: float | None = None
    height_T: float = 400.0
    step_h: float = 0.05
    tol: float = 1e-12
    adaptive: bool = True
    initial_T: float = 10.0

    def __post_init__(self) -> None:
        if not (self.height_T > 0 and self.step_h > 0 and self.tol > 0):
            raise DomainError("height_T, step_h and tol must be positive")
        if self.step_h > self.height_T:
            raise DomainError("step_h must not exceed height_T")


@dataclass(frozen=True)
class MBResult:
    value: complex
    tail_estimate: float
    height: float
    nodes: int


def default_abscissa(b: Sequence[float]) -> float:
    return max(0.0, -min(b)) + 0.75


def _abscissa(b: Sequence[float], policy: QuadraturePolicy) -> float:
    c = default_abscissa(b) if policy.abscissa_c is None else float(policy.abscissa_c)
    if not c > -min(b):
        raise DomainError(f"abscissa c = {c} must lie right of all poles (> {-min(b)})")
    return c


def _tail_shape(p: float, a: float, t: float) -> float:
    """Upper bound of ∫_T^∞ (t/T)^p e^{-a(t-T)} dt, inf if not yet decaying."""
    if p <= 0:
        return 1.0 / a
    if a * t > 2 * p:
        return 1.0 / (a - p / t)
    return math.inf


class _Line:
    """Integrand samples on Re s = c for fixed b and angle (modulus-free)."""

    def __init__(self, b: np.ndarray, c: float, angle: float):
        self.b, self.c, self.angle = b, c, angle
        self.k = b.shape[0]
        self.p = self.k * c + float(np.sum(b)) - self.k / 2.0
        self.decay_pos = self.k * math.pi / 2 - angle
        self.decay_neg = self.k * math.pi / 2 + angle

    def log_weights(self, t: np.ndarray) -> np.ndarray:
        # log of Π Γ(c+b+iT) e^{θT - icθ}/(2π); modulus factor |z|^{-c-iT} applied later
        lg = kernels.lgamma_nodes(self.b, self.c, t)
        return lg + self.angle * t - 1j * self.c * self.angle - math.log(2 * math.pi)

    def edge_magnitude(self, t: float) -> float:
        vals = self.log_weights(np.array([-t, t]))
        return float(np.exp(vals.real).sum())

    def tail_relative(self, t: float) -> float:
        # tail of |integrand| / |z|^{-c} beyond ±T, shaped by Stirling decay
        vals = np.exp(self.log_weights(np.array([-t, t])).real)
        neg = vals[0] * _tail_shape(self.p, self.decay_neg, t)
        pos = vals[1] * _tail_shape(self.p, self.decay_pos, t)
        return 2.0 * (neg + pos)

    def choose_height(self, policy: QuadraturePolicy, rel_target: float) -> tuple[float, float]:
        if not policy.adaptive:
            return policy.height_T, self.tail_relative(policy.height_T)
        t = min(policy.initial_T, policy.height_T)
        while True:
            tail = self.tail_relative(t)
            if tail < rel_target / 10:
                return t, tail
            if t >= policy.height_T:
                raise ConvergenceError(
                    f"Mellin-Barnes tail {tail:.3e} above {rel_target / 10:.3e} at height {t}"
                )
            t = min(policy.height_T, 1.5 * t)

    def nodes(self, height: float, h: float) -> tuple[np.ndarray, np.ndarray]:
        m = int(math.ceil(height / h))
        t = h * np.arange(-m, m + 1, dtype=np.float64)
        w = h * np.exp(self.log_weights(t))
        return t, w


def eval_mb(
    spec: GSpec, policy: QuadraturePolicy | None = None, *, full_output: bool = False
) -> complex | MBResult:
    """G^{k,0}_{0,k}(z | b) by trapezoidal quadrature on a vertical line."""
    policy = policy or QuadraturePolicy()
    b = np.asarray(spec.b_params, dtype=np.float64)
    c = _abscissa(spec.b_params, policy)
    line = _Line(b, c, spec.argument.angle)
    scale = spec.argument.modulus**-c
    height, tail_rel = line.choose_height(policy, policy.tol / scale if scale > 0 else math.inf)
    t, w = line.nodes(height, policy.step_h)
    lnmod = np.array([math.log(spec.argument.modulus)])
    value = complex(kernels.mb_line_sum(lnmod, t, w)[0]) * scale
    if not full_output:
        return value
    return MBResult(value=value, tail_estimate=tail_rel * scale, height=height, nodes=t.shape[0])


def eval_mb_many(
    b_params: Sequence[float],
    moduli: np.ndarray,
    angle: float,
    policy: QuadraturePolicy | None = None,
) -> tuple[np.ndarray, float]:
    """G at many moduli sharing one angle.

    Returns the values and the relative tail estimate, i.e. the absolute
    quadrature tail for modulus m is ``tail * m**-c``.
    """
    policy = policy or QuadraturePolicy()
    k = len(b_params)
    if abs(angle) >= k * math.pi / 2:
        raise DomainError("|arg z| must be below k*pi/2")
    b = np.asarray(b_params, dtype=np.float64)
    c = _abscissa(b_params, policy)
    line = _Line(b, c, angle)
    height, tail_rel = line.choose_height(policy, policy.tol)
    t, w = line.nodes(height, policy.step_h)
    moduli = np.asarray(moduli, dtype=np.float64)
    lnmod = np.log(moduli)
    vals = kernels.mb_line_sum(lnmod, t, w) * np.exp(-c * lnmod)
    return vals, tail_rel


def abscissa_for(b_params: Sequence[float], policy: QuadraturePolicy | None = None) -> float:
    return _abscissa(b_params, policy or QuadraturePolicy())


def log_moment(b_params: Sequence[float], angle: float, c: float) -> float:
    """log of (1/2π) ∫ |Π Γ(c + b_j + iT)| e^{θT} dT, so |G(z)| <= exp(.) |z|^{-c}."""
    b = np.asarray(b_params, dtype=np.float64)
    if not c > -float(b.min()):
        raise DomainError("c must lie right of all poles")
    line = _Line(b, c, angle)
    k = b.shape[0]
    # saddle of the weighted integrand sits near T* = c tan(θ/k)
    center = c * math.tan(angle / k)
    half = 20.0 * math.sqrt(c + 1.0) + 20.0
    while True:
        h = half / 2000.0
        t = np.arange(center - half, center + half + h / 2, h)
        lw = line.log_weights(t).real
        peak = float(lw.max())
        if lw[0] < peak - 40 and lw[-1] < peak - 40:
            break
        half *= 2
    return peak + math.log(float(np.sum(np.exp(lw - peak))) * h)


def eval_closed_progression(b: float, order_k: int, z: "PolarArg | complex | float") -> complex:
    """G for the progression b, b+1/k, ..., b+(k-1)/k:

    (2π)^{(k-1)/2} / √k · z^b · exp(-k z^{1/k}), principal k-th root taken
    from the supplied angle.
    """
    k = int(order_k)
    if k < 1:
        raise DomainError("order_k must be >= 1")
    zp = as_polar(z)
    if abs(zp.angle) >= k * math.pi / 2:
        raise DomainError("|arg z| must be below k*pi/2")
    lz = zp.log
    root = cmath.exp(lz / k)
    log_val = 0.5 * (k - 1) * math.log(2 * math.pi) - 0.5 * math.log(k) + b * lz - k * root
    return cmath.exp(log_val)


def progression_params(b: float, order_k: int) -> tuple[float, ...]:
    return tuple(b + j / order_k for j in range(order_k))


def bessel_k_half(nu_times_2: int, w: complex) -> complex:
    """K_{1/2}(w) or K_{3/2}(w) in closed form (Re w > 0)."""
    w = complex(w)
    if not w.real > 0:
        raise DomainError("bessel_k_half needs Re w > 0")
    nu2 = abs(int(nu_times_2))
    base = cmath.sqrt(math.pi / (2 * w)) * cmath.exp(-w)
    if nu2 == 1:
        return base
    if nu2 == 3:
        return base * (1 + 1 / w)
    raise DomainError("only orders 1/2 and 3/2 are supported")


__all__ = [
    "PolarArg",
    "GSpec",
    "QuadraturePolicy",
    "MBResult",
    "as_polar",
    "default_abscissa",
    "abscissa_for",
    "eval_mb",
    "eval_mb_many",
    "log_moment",
    "eval_closed_progression",
    "progression_params",
    "bessel_k_half",
]
