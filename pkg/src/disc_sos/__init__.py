"""Exact sum-of-squares certificates for discriminants of real symmetric matrices."""
from .certificates import Certificate, builtin, generate_from_module, generate_n3_five, generate_n4_seven, verify
from .exactalg import ExactScalar, I, parse_scalar, sqrt
from .polyring import Poly, VarSet
from .symspace import discriminant

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "ExactScalar",
    "I",
    "Poly",
    "VarSet",
    "builtin",
    "discriminant",
    "generate_from_module",
    "generate_n3_five",
    "generate_n4_seven",
    "parse_scalar",
    "sqrt",
    "verify",
]
