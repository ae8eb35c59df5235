"""Exact arithmetic foundation: fields, polynomials, series, linear algebra, SNF."""

from .fields import QQ, CoefficientField
from .finite import FiniteAlgebra, FiniteModule
from .linalg import MatrixOverRing, Subspace, linear_solve
from .localfrac import LocalFraction
from .poly import Polynomial, poly_arith
from .series import AtLeast, LaurentSeries, TruncatedSeries, liouville, series_arith
from .snf import SmithForm, smith_normal_form

__all__ = [
    "QQ", "AtLeast", "CoefficientField", "FiniteAlgebra", "FiniteModule", "LaurentSeries",
    "LocalFraction", "MatrixOverRing", "Polynomial", "SmithForm", "Subspace", "TruncatedSeries",
    "linear_solve", "liouville", "poly_arith", "series_arith", "smith_normal_form",
]
