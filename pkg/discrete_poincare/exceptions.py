"""Custom exceptions for the discrete Poincaré toolkit."""

from __future__ import annotations

from typing import Any


class PoincareError(Exception):
    """Base class for every input-class error raised by the library."""

    def __init__(self, message: str, payload: Any = None) -> None:
        super().__init__(message)
        self.payload = payload


class NegativeMass(PoincareError):
    """Raised when a pmf entry is negative."""


class NotNormalized(PoincareError):
    """Raised when pmf entries do not sum to one within tolerance."""


class EmptySupport(PoincareError):
    """Raised when every pmf entry is zero."""


class BadParameter(PoincareError):
    """Raised when a constructor or operation parameter is out of range."""


class DividedByZeroMass(PoincareError):
    """Raised when a score ratio would divide by a zero mass."""


class DegreeTooSmall(PoincareError):
    """Raised when a ULC degree n is smaller than the support's maximum."""


class LengthMismatch(PoincareError):
    """Raised when a test function does not cover {0, ..., N+1}."""


class ZeroDirichlet(PoincareError):
    """Raised when a Rayleigh quotient has a vanishing Dirichlet form.

    `centered` holds the numerator; a positive value means the function is a
    witness of an infinite Poincaré constant.
    """

    def __init__(self, message: str, centered: float = 0.0) -> None:
        super().__init__(message, payload=centered)
        self.centered = centered


class DegenerateSupport(PoincareError):
    """Raised when an operation needs at least two support points."""


class NoConvergence(PoincareError):
    """Raised when the symmetric eigensolver fails to converge."""


class NegativeDiscriminant(PoincareError):
    """Raised when a moment bound's square root argument is negative.

    This signals that the moments cannot come from the assumed ULC class.
    """


class BadDecomposition(PoincareError):
    """Raised when px - alpha * p1 is not a nonnegative measure."""


class ParseError(PoincareError):
    """Raised for malformed distribution specs or pmf files."""


class UnknownCase(PoincareError):
    """Raised when a reproduction case name is not recognized."""


__all__ = [
    "PoincareError",
    "NegativeMass",
    "NotNormalized",
    "EmptySupport",
    "BadParameter",
    "DividedByZeroMass",
    "DegreeTooSmall",
    "LengthMismatch",
    "ZeroDirichlet",
    "DegenerateSupport",
    "NoConvergence",
    "NegativeDiscriminant",
    "BadDecomposition",
    "ParseError",
    "UnknownCase",
]
