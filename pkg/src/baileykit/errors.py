"""Exception types shared across the engine."""


class BaileykitError(Exception):
    """Base class for all engine errors."""


class ZeroSeriesInversion(BaileykitError):
    """Attempted to invert a series with no nonzero known coefficient."""


class FormalDivergence(BaileykitError):
    """A sum or product does not converge in the truncated-series sense
    (term valuations fail to grow past the truncation order)."""


class DegenerateParameter(BaileykitError):
    """A free parameter falls on a degenerate value for the construction."""


class UnsupportedShift(BaileykitError):
    """The requested shift value is outside the construction's domain."""


class ConstraintViolation(BaileykitError):
    """Parameter bindings violate an identity's declared constraints."""


class UnknownIdentity(BaileykitError):
    """Identity ID not present in the corpus."""


class UnknownParameter(BaileykitError):
    """Parameter name not declared by the identity."""


class ParseError(BaileykitError):
    """Instance-file syntax error, with 1-based line/column diagnostics."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class EvaluationError(BaileykitError):
    """A builder could not produce both sides at the requested order."""
