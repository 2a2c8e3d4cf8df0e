"""Single entry point for gamma-function evaluations.

Every other module calls into these helpers so that the precision of the
gamma function has exactly one audited source.  The double-precision path
is backed by the C library (``math.gamma`` / ``math.lgamma``), the
multi-precision path by :mod:`mpmath`.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath

__all__ = [
    "gamma",
    "rgamma",
    "lgamma",
    "gamma_sign",
    "log_abs_rgamma",
    "is_pole",
    "mp_rgamma",
]


def is_pole(x: float, tol: float = 0.0) -> bool:
    """True when ``x`` is (within ``tol`` of) a non-positive integer."""
    if x > tol:
        return False
    return abs(x - round(x)) <= tol


def gamma_sign(x: float) -> int:
    """Sign of Gamma(x); 0 at the poles."""
    if x > 0:
        return 1
    if is_pole(x):
        return 0
    # Gamma is negative on (-1, 0), positive on (-2, -1), ...
    return -1 if math.floor(-x) % 2 == 0 else 1


def lgamma(x: float) -> float:
    """log|Gamma(x)|; +inf at the poles."""
    if is_pole(x):
        return math.inf
    return math.lgamma(x)


def log_abs_rgamma(x: float) -> float:
    """log|1/Gamma(x)|; -inf at the poles."""
    if is_pole(x):
        return -math.inf
    return -math.lgamma(x)


def gamma(x: float) -> float:
    if is_pole(x):
        raise ZeroDivisionError(f"Gamma has a pole at {x}")
    if isinstance(x, Fraction):
        x = float(x)
    if x < 171.0:
        return math.gamma(x)
    return math.exp(math.lgamma(x))


def rgamma(x: float) -> float:
    """1/Gamma(x), entire; exactly zero at the poles."""
    x = float(x)
    if is_pole(x):
        return 0.0
    if -170.0 < x < 170.0:
        return 1.0 / math.gamma(x)
    return gamma_sign(x) * math.exp(-math.lgamma(x))


def mp_rgamma(x) -> mpmath.mpf:
    return mpmath.rgamma(x)
