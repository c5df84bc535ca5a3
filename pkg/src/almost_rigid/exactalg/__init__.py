"""Exact arithmetic: cyclotomic scalars and sparse Laurent polynomials."""

from .cyclotomic import (
    CycScalar,
    FieldContext,
    cyclotomic_context,
    cyclotomic_polynomial,
    euler_phi,
    scalar_order,
)
from .laurent import (
    LaurentPoly,
    Monomial,
    PolyRing,
    exact_divide,
    exponent_gcd,
    format_poly,
    monic_divide,
    partial_derivative,
    poly_ring,
    substitute,
    support,
)
from .parsing import parse_poly, parse_scalar

__all__ = [
    "CycScalar",
    "FieldContext",
    "LaurentPoly",
    "Monomial",
    "PolyRing",
    "cyclotomic_context",
    "cyclotomic_polynomial",
    "euler_phi",
    "exact_divide",
    "exponent_gcd",
    "format_poly",
    "monic_divide",
    "parse_poly",
    "parse_scalar",
    "partial_derivative",
    "poly_ring",
    "scalar_order",
    "substitute",
    "support",
]
