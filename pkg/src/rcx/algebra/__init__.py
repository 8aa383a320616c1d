"""Exact arithmetic over F_q and the local ring F_q[[t]]."""

from .field import FieldElem, FieldError, FieldParams, field_arith, get_field
from .matrix import (
    OMatrix,
    SingularMatrixError,
    det_valuation,
    elementary_divisors,
    hermite_canonical,
    is_hermite_canonical,
)
from .poly import LocalPoly, NonUnitError, unit_inverse

__all__ = [
    "FieldElem",
    "FieldError",
    "FieldParams",
    "LocalPoly",
    "NonUnitError",
    "OMatrix",
    "SingularMatrixError",
    "det_valuation",
    "elementary_divisors",
    "field_arith",
    "get_field",
    "hermite_canonical",
    "is_hermite_canonical",
    "unit_inverse",
]
