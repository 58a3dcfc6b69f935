"""Shared exception types.

Invalid arguments raise the builtin ValueError; the classes here cover the
two failure modes that are not caller mistakes.
"""


class ResourceLimitError(RuntimeError):
    """An enumeration or precision request exceeds its configured budget."""


class InvariantViolationError(RuntimeError):
    """Two independent computations of the same quantity disagree.

    Raised when an internal cross-check fails (dual totient forms, integrality
    of an exact-rational accumulation, and similar). Always indicates a bug,
    never bad input.
    """
