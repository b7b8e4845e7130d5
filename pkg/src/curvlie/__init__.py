"""Exact curvature and Einstein metrics for left-invariant metrics on Lie groups."""

from .exact import QSqrt3, Rational, format_rational, parse_rational
from .kernels import BACKEND
from .poly import DEFAULT_TABLE, Polynomial, RationalFunction, VariableTable

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DEFAULT_TABLE",
    "Polynomial",
    "QSqrt3",
    "Rational",
    "RationalFunction",
    "VariableTable",
    "format_rational",
    "parse_rational",
]
