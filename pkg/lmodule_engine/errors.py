"""Exception hierarchy for lmodule-engine."""

from __future__ import annotations


class LmlError(Exception):
    """Base class for every error raised by the engine."""


class CartanTypeError(LmlError, ValueError):
    """Malformed Cartan type descriptor or invalid family/rank pair."""


class CapExceededError(LmlError):
    """A configured size cap would be exceeded."""

    def __init__(self, what: str, size: int, cap: int):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"{what} has size {size}, above the configured cap {cap}")


class OrderingError(LmlError, ValueError):
    """Parabolics or strata are not in the required order or position."""


class DominanceError(LmlError, ValueError):
    """A highest weight is not dominant integral for the relevant Levi."""


class OracleModeError(LmlError):
    """The real-form oracle cannot answer the query in its current mode."""


class FormatError(LmlError):
    """An L-module document or oracle table is malformed or has the wrong version."""


class ChecksumError(FormatError):
    """An L-module document does not match its recorded checksum."""


class ConfigError(LmlError, ValueError):
    """Bad cap override."""


class ProblemSpecError(LmlError):
    """A problem file could not be parsed or validated."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(f"{where}{message}")


class InvariantError(LmlError, AssertionError):
    """An internal invariant failed. Always a bug."""
