"""
Exception types for the cubature toolkit.

Validation problems derive from ValueError, runtime failures from RuntimeError,
and everything derives from CubatureError so callers can catch the family.
"""

from typing import Optional


class CubatureError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(CubatureError, ValueError):
    """A configuration value is out of range."""


class StructureError(CubatureError, ValueError):
    """Invalid rule structure, generator, or variable vector."""


class RuleFormatError(CubatureError, ValueError):
    """
    A rule file is malformed or violates a rule invariant.

    Args:
        message: Description of the problem
        line: 1-based line in the source file, when known
        field: Dotted path of the offending field, when known
    """

    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(f"field '{field}'")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class EvaluationError(CubatureError, RuntimeError):
    """
    A numerical evaluation failed.

    Args:
        message: Description of the failure
        index: Index of the point at which evaluation failed, when known
    """

    def __init__(self, message: str, index: Optional[int] = None):
        self.index = index
        if index is not None:
            message = f"{message} (point {index})"
        super().__init__(message)
