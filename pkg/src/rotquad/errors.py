"""Exception hierarchy shared by all modules."""


class RotQuadError(Exception):
    """Base class for all library errors."""


class AlgebraError(RotQuadError):
    """Invalid or degenerate input to a numerical algebra routine."""


class DegenerateError(RotQuadError):
    """Geometric configuration violates a genericity precondition."""


class ConsistencyError(RotQuadError):
    """An internal cross-check failed (indicates a bug or broken input data)."""
