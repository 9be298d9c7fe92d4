"""Semantic exceptions; the CLI maps these onto its exit codes."""


class EkrLabError(Exception):
    """Base class for all package errors."""


class DomainError(EkrLabError, ValueError):
    """Arguments outside a documented precondition (exit code 2)."""


class ResourceLimitError(EkrLabError, RuntimeError):
    """An explicit edge-count or search-node cap was exceeded (exit code 3)."""


class ParseError(EkrLabError, ValueError):
    """Malformed input file (exit code 4)."""
