"""Deterministic Sally-Anne belief-task generator, oracle and scorer."""

__version__ = "0.1.0"
