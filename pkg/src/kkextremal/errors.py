"""Exception types raised by the package."""

from __future__ import annotations


class KKError(Exception):
    """Base class for every error raised here."""


class InvalidInput(KKError, ValueError):
    pass


class InvalidHypergraph(KKError, ValueError):
    pass


class NoTree(KKError, ValueError):
    """Raised when a hypergraph has no ordering that admits extension trees."""


class CapacityError(KKError):
    """Raised when a computation would exceed a ground-set or work budget."""


class InvalidCounts(KKError, ValueError):
    pass


class Unsupported(KKError):
    pass


class ParseError(KKError, ValueError):
    pass
