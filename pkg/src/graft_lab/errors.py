"""Exception hierarchy shared by every module."""

from __future__ import annotations

from typing import Any


class GraftError(Exception):
    """Base class for all library errors."""


class FormatError(GraftError):
    """Malformed graph input: loops, parallel edges, unknown vertices."""


class ParityError(GraftError):
    """A connected component holds an odd number of terminals."""

    def __init__(self, message: str, component: frozenset | None = None):
        super().__init__(message)
        self.component = component


class SizeError(GraftError):
    """An exhaustive routine was asked to exceed its configured bound."""


class DisconnectedError(GraftError):
    """Two vertices lie in different connected components."""


class PreconditionError(GraftError):
    """An argument violates an operation's precondition."""


class InternalInvariantError(GraftError):
    """A computed object broke an invariant that must hold by construction."""


class CapExceeded(GraftError):
    """Enumeration stopped at its cap; ``partial`` holds what was found."""

    def __init__(self, message: str, partial: list):
        super().__init__(message)
        self.partial = partial


class PropertyViolation(GraftError):
    """A structural property failed on a concrete instance."""

    def __init__(self, check: str, message: str, witness: dict[str, Any] | None = None):
        super().__init__(f"{check}: {message}")
        self.check = check
        self.witness = witness or {}
