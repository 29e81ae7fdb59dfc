"""Exception types shared across the package."""

from __future__ import annotations


class TaunetsError(Exception):
    """Base class for all package errors."""


class DomainError(TaunetsError, ValueError):
    """An argument lies outside the domain of an operation."""


class NetEvaluationError(TaunetsError):
    """A net produced NaN or +inf (or hit a domain violation) while being evaluated."""

    def __init__(self, message: str, eps: float | None = None, x=None):
        self.eps = eps
        self.x = None if x is None else [float(v) for v in x]
        where = []
        if eps is not None:
            where.append(f"eps={eps!r}")
        if self.x is not None:
            where.append(f"x={self.x!r}")
        if where:
            message = f"{message} at {', '.join(where)}"
        super().__init__(message)


class ModerationError(TaunetsError):
    """A net that should represent a generalized number is not moderate."""


class NudgeConstructionError(TaunetsError):
    """No sign choice keeps a nudged point inside the box at some eps."""

    def __init__(self, message: str, eps: float):
        self.eps = eps
        super().__init__(f"{message} at eps={eps!r}")
