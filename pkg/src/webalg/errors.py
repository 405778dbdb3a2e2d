"""Exception types that the command line maps to exit codes."""

from __future__ import annotations


class ParseError(ValueError):
    """Malformed input text."""


class PreconditionError(ValueError):
    """Input is well formed but outside the range an operation accepts."""
