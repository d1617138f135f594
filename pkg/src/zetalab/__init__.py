"""Numerical verification of Lambert-series transformation formulas."""

from .arith import DivisorSpec, SumResult, TruncationPolicy, lambert_sum
from .errors import ConvergenceError, DomainError, PoleError, ZetalabError
from .identities import IdentityCase, VerificationReport, verify
from .meijerg import GSpec, PolarArg, QuadraturePolicy, eval_mb

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DomainError",
    "PoleError",
    "ZetalabError",
    "DivisorSpec",
    "SumResult",
    "TruncationPolicy",
    "lambert_sum",
    "IdentityCase",
    "VerificationReport",
    "verify",
    "GSpec",
    "PolarArg",
    "QuadraturePolicy",
    "eval_mb",
    "__version__",
]
