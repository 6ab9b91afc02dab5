"""Exact verification of the effective Lie-Kolchin theorem for matrix pairs over Q."""

__version__ = "0.1.0"

from .errors import DomainError, LKError, PreconditionError, ResourceError, TheoremFalsified
from .exact import UniPoly, binom, binom_poly, format_rat, inv_factorial, poly_interpolate, rat
from .matrix import MatQ, MinorSpec
from .lk import (
    TriangularizationCertificate,
    Verdict,
    check_certificate,
    common_eigenvector,
    counterexample_search,
    triangularize,
    verify_main_theorem,
)

__all__ = [
    "DomainError",
    "LKError",
    "MatQ",
    "MinorSpec",
    "PreconditionError",
    "ResourceError",
    "TheoremFalsified",
    "TriangularizationCertificate",
    "UniPoly",
    "Verdict",
    "binom",
    "binom_poly",
    "check_certificate",
    "common_eigenvector",
    "counterexample_search",
    "format_rat",
    "inv_factorial",
    "poly_interpolate",
    "rat",
    "triangularize",
    "verify_main_theorem",
]
