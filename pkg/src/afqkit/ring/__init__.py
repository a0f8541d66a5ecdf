from .poly import Poly, VARS, poly_sum
from .qscalar import QScalar, poly_gcd
from .ratfunc import RatFunc, ZeroDivision
from .series import (
    DeltaTerm,
    PuiseuxSeries,
    WindowError,
    delta_apply,
    q_product_series,
    qpochhammer,
    qpochhammer_zseries,
    qscalar_from_poly,
    theta,
)

__all__ = [
    "Poly", "VARS", "poly_sum", "QScalar", "poly_gcd", "RatFunc", "ZeroDivision",
    "DeltaTerm", "PuiseuxSeries", "WindowError", "delta_apply", "q_product_series",
    "qpochhammer", "qpochhammer_zseries", "qscalar_from_poly", "theta",
]
