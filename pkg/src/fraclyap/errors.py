"""Exception types shared across the package."""

from __future__ import annotations


class FracLyapError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(FracLyapError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class GammaPoleError(ParameterError):
    """The gamma function was evaluated at a nonpositive integer."""


class GridMismatchError(FracLyapError, ValueError):
    """Two grid functions (or a grid and a problem) live on different intervals."""


class ExpressionError(FracLyapError):
    """Base class for expression parsing/evaluation failures."""


class ExprSyntaxError(ExpressionError):
    """Malformed expression source.

    Carries the byte offset of the failure and a description of what was
    expected there.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class ExprEvalError(ExpressionError):
    """Expression evaluation hit a domain violation or a missing binding.

    ``fragment`` holds the printed form of the offending subexpression.
    """

    def __init__(self, message: str, fragment: str = ""):
        super().__init__(f"{message}: {fragment}" if fragment else message)
        self.fragment = fragment


class ConfigError(FracLyapError):
    """Invalid or incomplete run configuration handed to the CLI."""
