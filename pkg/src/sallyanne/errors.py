"""Exception types shared across the package."""

from __future__ import annotations


class SallyAnneError(Exception):
    """Base class for all package errors."""


class InvalidConfigError(SallyAnneError):
    """A parameter combination violates a documented precondition."""


class ClosureViolationError(SallyAnneError):
    """A structure fails the room-closure replay.

    Carries the offending (occupant, exiter) pair: `occupant` was present in
    the room when `exiter` left without holding an edge to it.
    """

    def __init__(self, occupant: int, exiter: int):
        self.occupant = occupant
        self.exiter = exiter
        super().__init__(
            f"occupant {occupant} present at exit of {exiter} without an edge"
        )


class SelectionError(SallyAnneError):
    """A semantic selection index falls outside its assigned pool block."""


class ParseError(SallyAnneError):
    """Scene or record text does not match the generating grammar."""


class PredictionsError(SallyAnneError):
    """A predictions file violates the scoring contract."""
