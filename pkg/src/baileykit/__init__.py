"""baileykit: exact q-series arithmetic, Bailey-pair machinery, and a
coefficientwise identity-verification harness.

All truncation orders are in t-units, t = q^(1/2); whole powers of q live on
even t-exponents.
"""

from .errors import (
    BaileykitError,
    ConstraintViolation,
    DegenerateParameter,
    EvaluationError,
    FormalDivergence,
    ParseError,
    UnknownIdentity,
    UnknownParameter,
    UnsupportedShift,
    ZeroSeriesInversion,
)
from .series import INFINITY, Monomial, Rat, TSeries, eq_up_to, mono, qmono, rat

__all__ = [
    "BaileykitError",
    "ConstraintViolation",
    "DegenerateParameter",
    "EvaluationError",
    "FormalDivergence",
    "ParseError",
    "UnknownIdentity",
    "UnknownParameter",
    "UnsupportedShift",
    "ZeroSeriesInversion",
    "INFINITY",
    "Monomial",
    "Rat",
    "TSeries",
    "eq_up_to",
    "mono",
    "qmono",
    "rat",
]

__version__ = "0.1.0"
