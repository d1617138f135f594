"""Exception types shared by every zetalab module."""

from __future__ import annotations


class ZetalabError(Exception):
    """Base class for library errors."""


class PoleError(ZetalabError, ValueError):
    """Raised when a function is evaluated at one of its poles."""


class DomainError(ZetalabError, ValueError):
    """Raised when an argument lies outside the supported domain."""


class ConvergenceError(ZetalabError, ArithmeticError):
    """Raised when a truncation or quadrature budget is exhausted before tolerance."""
