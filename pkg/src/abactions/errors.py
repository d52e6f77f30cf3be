"""Exception types shared across the package."""
from __future__ import annotations


class CeilingExceeded(RuntimeError):
    """An enumeration would exceed its configured size ceiling."""

    def __init__(self, what: str, size: int, ceiling: int):
        self.what = what
        self.size = size
        self.ceiling = ceiling
        super().__init__(f"{what}: size {size} exceeds ceiling {ceiling}")


class InfeasibleSignature(ValueError):
    """A signature admits no action (non-integral genus, r = 1, ...)."""


class InvalidMove(ValueError):
    """A move cannot be applied to the given generating vector."""


class OutOfScope(ValueError):
    """The requested case lies outside what the closed forms cover."""


class PipelineInconsistency(ArithmeticError):
    """The orbit-count pipeline produced a non-integral or negative entry."""
