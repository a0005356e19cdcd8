"""
Exception hierarchy for the stable-image toolkit.

Library code raises these; only the command-line front door turns them into
exit codes and ERR report lines.
"""
from typing import Optional


class StableImageError(Exception):
    """Base class for every error raised by the toolkit."""

    exit_code = 1


class ConfigError(StableImageError):
    pass


class InvalidInvocation(StableImageError):
    pass


class ParseError(StableImageError):
    """Syntax error with a 1-based line/column position."""

    def __init__(self, message: str, line: int = 1, column: int = 1, origin: str = "<inline>"):
        self.message = message
        self.line = line
        self.column = column
        self.origin = origin
        super().__init__(f"{origin}:{line}:{column}: {message}")


class UnknownVariableError(StableImageError):
    def __init__(self, name: str, ring=None):
        self.name = name
        ring_text = ", ".join(ring) if ring else ""
        super().__init__(f"unknown variable {name!r} (ring: {ring_text})")


class RingMismatchError(StableImageError):
    pass


class ArityError(StableImageError):
    pass


class MultivariateInputError(StableImageError):
    pass


class ZeroPolynomialError(StableImageError):
    pass


class DegenerateMapError(StableImageError):
    pass


class InvalidNodeError(StableImageError):
    pass


class SpecError(StableImageError):
    pass


class NotApplicableError(StableImageError):
    pass


class DegreeCapExceeded(StableImageError):
    exit_code = 3

    def __init__(self, degree: int, cap: int, what: Optional[str] = None):
        self.degree = degree
        self.cap = cap
        label = f"{what}: " if what else ""
        super().__init__(f"{label}total degree {degree} exceeds cap {cap}")


class UnresolvedError(StableImageError):
    """Raised when a bounded search stops before reaching a verdict."""

    exit_code = 3
