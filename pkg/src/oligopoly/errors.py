"""Exception types shared by the solvers and the CLI."""

from __future__ import annotations


class DomainError(ValueError):
    """Input violates a model precondition or invariant."""


class SizeError(DomainError):
    """Problem is too large for an exponential-time routine."""


class ConvergenceError(RuntimeError):
    """An iterative routine hit its iteration cap.

    The partial history is kept on ``log`` so callers can inspect where the
    iteration stalled.
    """

    def __init__(self, message: str, log: list | None = None):
        super().__init__(message)
        self.log = list(log) if log is not None else []
