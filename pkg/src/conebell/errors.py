"""Shared exception types.

Exit-code mapping for the command line lives in cli.py: parse errors exit
with 2, resource caps with 3, input invariant violations with 4.
"""


class CapExceededError(RuntimeError):
    """A configurable resource cap was hit; the message names the cap."""


class DegenerateVectorError(ValueError):
    """An operation that needs a nonzero vector received the zero vector."""


class ParseError(ValueError):
    """Malformed text input, with position information when available."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + where)


class InvariantViolationError(ValueError):
    """Input data violates a documented invariant (e.g. bound ordering)."""
