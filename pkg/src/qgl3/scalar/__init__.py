"""Exact scalars: Q(zeta_N) extended by declared formal parameters."""

from .cyclotomic import CycContext, CycNumber, cyclotomic_polynomial, sqrt_rational
from .field import Context, Param, PoleError, Scalar, poly_gcd
from .parse import ScalarSyntaxError, parse_scalar, render_scalar

__all__ = [
    "Context",
    "CycContext",
    "CycNumber",
    "Param",
    "PoleError",
    "Scalar",
    "ScalarSyntaxError",
    "cyclotomic_polynomial",
    "parse_scalar",
    "poly_gcd",
    "render_scalar",
    "sqrt_rational",
]
