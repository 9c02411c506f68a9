"""Toy decoder-only learner for the generated belief-task files."""

__version__ = "0.1.0"
