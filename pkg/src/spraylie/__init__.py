"""Exact sprays, connections, curvature, and Lie-algebra analysis for
polynomial-times-exponential metrics."""

from .symexpr import CanonicalExpr, Rational, parse_expr

__all__ = ["CanonicalExpr", "Rational", "parse_expr"]

__version__ = "0.1.0"
