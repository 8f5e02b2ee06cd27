"""Newton-polygon slopes of L-functions attached to x^d + a x^(d-1) over F_q,
checked three ways: the closed-form prediction, brute-force exponential sums,
and Dwork's trace formula."""

from .cyclotomic import CyclotomicInt, cyclo_valuation
from .exact import INF
from .lfunction import CurveConfig, compute_l, exp_sum, partial_l
from .polygons import lower_hull, predict_theorem1, predict_theorem2

__all__ = [
    "INF",
    "CurveConfig",
    "CyclotomicInt",
    "compute_l",
    "cyclo_valuation",
    "exp_sum",
    "lower_hull",
    "partial_l",
    "predict_theorem1",
    "predict_theorem2",
]
