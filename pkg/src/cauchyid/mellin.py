"""Exact algebra on Mellin transforms of gamma type.

An expression represents

    s  ->  C * D**s * prod_j Gamma(A_j s + a_j) / prod_k Gamma(B_k s + b_k)

on an open strip of ``s``.  Slopes and offsets are exact rationals so that
identities in law reduce to multiset equality after canonicalization;
the constant ``C`` and scale ``D`` are kept numerically, in log space.

Independent products multiply transforms (:func:`product`), powers rescale
the variable (:func:`power`), and :func:`equals` decides whether two
expressions describe the same law.
"""

from __future__ import annotations

import json
import math
import numbers
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Union

import numpy as np

from . import gammafn
from .errors import ParameterError

__all__ = [
    "GammaFactor",
    "MellinExpr",
    "JansonReport",
    "Canonical",
    "to_rational",
    "unit",
    "expr_gamma",
    "expr_beta",
    "expr_M",
    "expr_X",
    "expr_D",
    "expr_abs_cauchy",
    "expr_Y",
    "expr_half_stable",
    "expr_half_student",
    "product",
    "power",
    "scaled",
    "duplication_rewrite",
    "canonical",
    "equals",
    "janson_gate",
    "eval_at",
    "log_eval_at",
    "log_convexity_probe",
    "strip_points",
    "intersect_strips",
    "to_json",
    "from_json",
]

Rational = Union[Fraction, int, float, str]
Bound = Optional[Fraction]

_LOG2 = math.log(2.0)
_HALF_LOG_PI = 0.5 * math.log(math.pi)


def to_rational(x: Rational) -> Fraction:
    """Exact rational from an int, Fraction, ``"p/q"`` string or float.

    Floats are read through their shortest repr, so ``1.2`` becomes ``6/5``.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise ParameterError("booleans are not rationals")
    if isinstance(x, numbers.Integral):
        return Fraction(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            raise ParameterError(f"non-finite value {x}")
        return Fraction(repr(x))
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError as exc:
            raise ParameterError(f"cannot parse rational {x!r}") from exc
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return Fraction(x.numerator, x.denominator)
    raise ParameterError(f"cannot convert {x!r} to a rational")


@dataclass(frozen=True, order=True)
class GammaFactor:
    """Gamma(slope * s + offset)."""

    slope: Fraction
    offset: Fraction

    def __post_init__(self):
        object.__setattr__(self, "slope", to_rational(self.slope))
        object.__setattr__(self, "offset", to_rational(self.offset))
        if self.slope == 0:
            raise ParameterError("gamma factor slope must be non-zero")

    def arg(self, s: float) -> float:
        return float(self.slope) * s + float(self.offset)

    def __str__(self) -> str:
        return f"G({self.slope}s+{self.offset})"


def _sorted(fs: Iterable[GammaFactor]) -> tuple[GammaFactor, ...]:
    return tuple(sorted(fs))


@dataclass(frozen=True)
class MellinExpr:
    numer: tuple[GammaFactor, ...] = ()
    denom: tuple[GammaFactor, ...] = ()
    log_const: float = 0.0
    log_scale: float = 0.0
    strip: tuple[Bound, Bound] = (None, None)

    def __post_init__(self):
        object.__setattr__(self, "numer", _sorted(self.numer))
        object.__setattr__(self, "denom", _sorted(self.denom))
        lo, hi = self.strip
        lo = None if lo is None else to_rational(lo)
        hi = None if hi is None else to_rational(hi)
        if lo is not None and hi is not None and not lo < hi:
            raise ParameterError(f"empty strip ({lo}, {hi})")
        object.__setattr__(self, "strip", (lo, hi))

    def __call__(self, s: float) -> float:
        return eval_at(self, s)

    def __str__(self) -> str:
        num = "".join(str(f) for f in self.numer) or "1"
        den = "".join(str(f) for f in self.denom) or "1"
        return (
            f"exp({self.log_const:.6g}) * exp({self.log_scale:.6g})^s * {num} / {den}"
            f" on {self.strip}"
        )


def unit() -> MellinExpr:
    """Transform of the constant 1."""
    return MellinExpr()


def _lgamma(x: Fraction) -> float:
    return gammafn.lgamma(float(x))


def expr_gamma(c: Rational) -> MellinExpr:
    c = to_rational(c)
    if c <= 0:
        raise ParameterError("gamma shape must be positive")
    return MellinExpr((GammaFactor(1, c),), (), -_lgamma(c), 0.0, (-c, None))


def expr_beta(a: Rational, b: Rational) -> MellinExpr:
    a, b = to_rational(a), to_rational(b)
    if a <= 0 or b <= 0:
        raise ParameterError("beta parameters must be positive")
    return MellinExpr(
        (GammaFactor(1, a),), (GammaFactor(1, a + b),), _lgamma(a + b) - _lgamma(a), 0.0, (-a, None)
    )


def expr_M(alpha: Rational, beta: Rational, t: Rational = 0) -> MellinExpr:
    """Law with density proportional to x^t phi(-alpha, beta, -x)."""
    alpha, beta, t = to_rational(alpha), to_rational(beta), to_rational(t)
    if not (0 <= alpha <= 1) or beta < 0:
        raise ParameterError("M_{alpha,beta} exists only for alpha in [0,1], beta >= 0")
    if t <= -1:
        raise ParameterError("t must exceed -1")
    top = alpha * (1 + t) + beta
    if top <= 0:
        raise ParameterError("alpha (1 + t) + beta must be positive")
    const = _lgamma(top) - _lgamma(1 + t)
    numer = (GammaFactor(1, 1 + t),)
    if alpha == 0:
        # Gamma(top + 0 s) is a constant; it cancels the normalization
        return MellinExpr(numer, (), const - _lgamma(top), 0.0, (-1 - t, None))
    return MellinExpr(numer, (GammaFactor(alpha, top),), const, 0.0, (-1 - t, None))


def expr_X(a: Rational, b: Rational, c: Rational, d: Rational) -> MellinExpr:
    """Gamma(c)/(Gamma(a)Gamma(b)) * Gamma(a+s)Gamma(b-s)/Gamma(c+ds) on (-a, b)."""
    a, b, c, d = (to_rational(v) for v in (a, b, c, d))
    if a <= 0 or b <= 0 or c <= 0:
        raise ParameterError("a, b, c must be positive")
    if d == 0:
        raise ParameterError("d must be non-zero")
    return MellinExpr(
        (GammaFactor(1, a), GammaFactor(-1, b)),
        (GammaFactor(d, c),),
        _lgamma(c) - _lgamma(a) - _lgamma(b),
        0.0,
        (-a, b),
    )


def expr_D(a: Rational, b: Rational, c: Rational, d: Rational) -> MellinExpr:
    """Two-denominator family: Gamma(a+s)Gamma(b-s)/(Gamma(c+s)Gamma(d+s)), normalized."""
    a, b, c, d = (to_rational(v) for v in (a, b, c, d))
    if min(a, b, c, d) <= 0:
        raise ParameterError("parameters must be positive")
    return MellinExpr(
        (GammaFactor(1, a), GammaFactor(-1, b)),
        (GammaFactor(1, c), GammaFactor(1, d)),
        _lgamma(c) + _lgamma(d) - _lgamma(a) - _lgamma(b),
        0.0,
        (-a, b),
    )


def expr_abs_cauchy(alpha: Rational) -> MellinExpr:
    """|C_alpha|: sin(pi/alpha)/pi * Gamma((1+s)/alpha) Gamma(1-(1+s)/alpha) on (-1, alpha-1)."""
    alpha = to_rational(alpha)
    if alpha <= 1:
        raise ParameterError("alpha must exceed 1")
    inv = 1 / alpha
    return MellinExpr(
        (GammaFactor(inv, inv), GammaFactor(-inv, 1 - inv)),
        (),
        math.log(math.sin(math.pi * float(inv)) / math.pi),
        0.0,
        (-1, alpha - 1),
    )


def expr_Y() -> MellinExpr:
    """Law with density (1+x) e^{-x} / 2: E[Y^s] = (s+2) Gamma(s+1) / 2."""
    return MellinExpr(
        (GammaFactor(1, 3), GammaFactor(1, 1)), (GammaFactor(1, 2),), -_LOG2, 0.0, (-1, None)
    )


def expr_half_stable(alpha: Rational) -> MellinExpr:
    """|Z| for the symmetric stable law with characteristic function exp(-|x|^alpha)."""
    alpha = to_rational(alpha)
    if not 0 < alpha <= 1:
        raise ParameterError("alpha must lie in (0, 1]")
    h = Fraction(1, 2)
    return MellinExpr(
        (GammaFactor(1, 1), GammaFactor(-1 / alpha, 1)),
        (GammaFactor(h, 1), GammaFactor(-h, 1)),
        0.0,
        0.0,
        (-1, alpha),
    )


def expr_half_student(nu: Rational) -> MellinExpr:
    """|T_nu|: nu^{s/2} Gamma((1+s)/2) Gamma((nu-s)/2) / (sqrt(pi) Gamma(nu/2)) on (-1, nu)."""
    nu = to_rational(nu)
    if nu <= 0:
        raise ParameterError("nu must be positive")
    h = Fraction(1, 2)
    return MellinExpr(
        (GammaFactor(h, h), GammaFactor(-h, nu / 2)),
        (),
        -_HALF_LOG_PI - _lgamma(nu / 2),
        0.5 * math.log(float(nu)),
        (-1, nu),
    )


def intersect_strips(s1, s2) -> tuple[Bound, Bound]:
    lo = s1[0] if s2[0] is None else s2[0] if s1[0] is None else max(s1[0], s2[0])
    hi = s1[1] if s2[1] is None else s2[1] if s1[1] is None else min(s1[1], s2[1])
    if lo is not None and hi is not None and not lo < hi:
        raise ParameterError(f"strips {s1} and {s2} do not overlap")
    return lo, hi


def product(e1: MellinExpr, e2: MellinExpr) -> MellinExpr:
    """Transform of the product of independent variables."""
    return MellinExpr(
        e1.numer + e2.numer,
        e1.denom + e2.denom,
        e1.log_const + e2.log_const,
        e1.log_scale + e2.log_scale,
        intersect_strips(e1.strip, e2.strip),
    )


def power(e: MellinExpr, p: Rational) -> MellinExpr:
    """Transform of X**p: s is replaced by p*s."""
    p = to_rational(p)
    if p == 0:
        raise ParameterError("power must be non-zero")
    lo, hi = e.strip
    lo = None if lo is None else lo / p
    hi = None if hi is None else hi / p
    if p < 0:
        lo, hi = hi, lo
    return MellinExpr(
        tuple(GammaFactor(f.slope * p, f.offset) for f in e.numer),
        tuple(GammaFactor(f.slope * p, f.offset) for f in e.denom),
        e.log_const,
        e.log_scale * float(p),
        (lo, hi),
    )


def scaled(e: MellinExpr, k: float) -> MellinExpr:
    """Transform of k*X for a constant k > 0."""
    if not k > 0:
        raise ParameterError("scale factor must be positive")
    return MellinExpr(e.numer, e.denom, e.log_const, e.log_scale + math.log(float(k)), e.strip)


# ---------------------------------------------------------------------------
# evaluation


def _in_strip(e: MellinExpr, s: float) -> bool:
    lo, hi = e.strip
    return (lo is None or s > lo) and (hi is None or s < hi)


def log_eval_at(e: MellinExpr, s: float) -> tuple[float, int]:
    """``(log|value|, sign)`` of the transform at s."""
    if not _in_strip(e, s):
        raise ParameterError(f"s={s} lies outside the strip {e.strip}")
    total = e.log_const + s * e.log_scale
    sign = 1
    for f in e.numer:
        x = f.arg(s)
        if gammafn.is_pole(x):
            raise ParameterError(f"numerator pole of {f} at s={s}")
        total += gammafn.lgamma(x)
        sign *= gammafn.gamma_sign(x)
    for f in e.denom:
        x = f.arg(s)
        if gammafn.is_pole(x):
            return -math.inf, 0
        total -= gammafn.lgamma(x)
        sign *= gammafn.gamma_sign(x)
    return total, sign


def eval_at(e: MellinExpr, s: float) -> float:
    lv, sign = log_eval_at(e, float(s))
    if sign == 0:
        return 0.0
    return sign * math.exp(lv)


# ---------------------------------------------------------------------------
# canonical forms


def _split(f: GammaFactor) -> tuple[GammaFactor, GammaFactor, float, float]:
    """Legendre duplication of Gamma(A s + b) into two factors of slope A/2.

    Returns the two factors and the (log constant, log scale) that multiply them.
    """
    half = f.slope / 2
    g1 = GammaFactor(half, f.offset / 2)
    g2 = GammaFactor(half, f.offset / 2 + Fraction(1, 2))
    return g1, g2, float(f.offset - 1) * _LOG2 - _HALF_LOG_PI, float(f.slope) * _LOG2


def _cancel(numer: list, denom: list) -> tuple[list, list]:
    cn, cd = Counter(numer), Counter(denom)
    common = cn & cd
    return sorted((cn - common).elements()), sorted((cd - common).elements())


def _min_slope(*exprs: MellinExpr) -> Optional[Fraction]:
    slopes = [abs(f.slope) for e in exprs for f in e.numer + e.denom]
    return min(slopes) if slopes else None


def _power_of_two_ratio(a: Fraction, u: Fraction) -> int:
    """k >= 1 with a = 2**k u, else 0."""
    r = a / u
    if r.denominator != 1 or r.numerator < 2:
        return 0
    n = r.numerator
    if n & (n - 1):
        return 0
    return n.bit_length() - 1


def duplication_rewrite(e: MellinExpr, unit_slope: Optional[Rational] = None) -> MellinExpr:
    """Split every factor whose |slope| is 2**k times the unit slope (k >= 1).

    The unit defaults to the smallest |slope| in the expression.  Constants
    and scales produced by the duplication formula are folded in exactly;
    identical factors in numerator and denominator are then cancelled.
    The result is a fixed point: applying the rewrite again changes nothing.
    """
    u = to_rational(unit_slope) if unit_slope is not None else _min_slope(e)
    if u is None:
        return e
    u = abs(u)
    log_c, log_s = e.log_const, e.log_scale
    out = {"n": [], "d": []}
    for side, factors, sgn in (("n", e.numer, 1), ("d", e.denom, -1)):
        stack = list(factors)
        while stack:
            f = stack.pop()
            if _power_of_two_ratio(abs(f.slope), u):
                g1, g2, dc, ds = _split(f)
                log_c += sgn * dc
                log_s += sgn * ds
                stack.extend((g1, g2))
            else:
                out[side].append(f)
    numer, denom = _cancel(out["n"], out["d"])
    return MellinExpr(tuple(numer), tuple(denom), log_c, log_s, e.strip)


@dataclass(frozen=True)
class Canonical:
    """Symbolic skeleton of an expression: gamma factors with offsets in (0, 1]
    and the linear factors (s - root) released by the shift reduction."""

    numer: tuple[GammaFactor, ...]
    denom: tuple[GammaFactor, ...]
    lin_numer: tuple[Fraction, ...] = field(default=())
    lin_denom: tuple[Fraction, ...] = field(default=())


def _shift_reduce(f: GammaFactor) -> tuple[GammaFactor, list, list]:
    """Gamma(A s + a) = Gamma(A s + a0) * (linear factors) with a0 in (0, 1].

    Returns the reduced factor and roots of the linear factors that land in
    the same / opposite side of the fraction.
    """
    a = f.offset
    n = math.ceil(a) - 1  # a0 = a - n lies in (0, 1]
    a0 = a - n
    same, opposite = [], []
    if n > 0:
        # Gamma(y + n) = Gamma(y) * y (y+1) ... (y+n-1)
        same = [-(a0 + j) / f.slope for j in range(n)]
    elif n < 0:
        # Gamma(y) = Gamma(y + m) / (y (y+1) ... (y+m-1)),  y = A s + a
        opposite = [-(a + j) / f.slope for j in range(-n)]
    return GammaFactor(f.slope, a0), same, opposite


def canonical(e: MellinExpr, unit_slope: Optional[Rational] = None) -> Canonical:
    r = duplication_rewrite(e, unit_slope)
    gn, gd, ln, ld = [], [], [], []
    for f in r.numer:
        g, same, opp = _shift_reduce(f)
        gn.append(g)
        ln += same
        ld += opp
    for f in r.denom:
        g, same, opp = _shift_reduce(f)
        gd.append(g)
        ld += same
        ln += opp
    gn, gd = _cancel(gn, gd)
    ln, ld = _cancel(ln, ld)
    return Canonical(tuple(gn), tuple(gd), tuple(ln), tuple(ld))


def strip_points(strip: tuple[Bound, Bound], n: int = 5) -> list[float]:
    """``n`` equally spaced interior points of a strip (a width-4 window if unbounded)."""
    lo, hi = strip
    if lo is not None and hi is not None:
        lo_f, hi_f = float(lo), float(hi)
    elif lo is not None:
        lo_f, hi_f = float(lo), float(lo) + 4.0
    elif hi is not None:
        lo_f, hi_f = float(hi) - 4.0, float(hi)
    else:
        lo_f, hi_f = -2.0, 2.0
    step = (hi_f - lo_f) / (n + 1)
    return [lo_f + step * (k + 1) for k in range(n)]


def equals(e1: MellinExpr, e2: MellinExpr, tol: float = 1e-10) -> bool:
    """True iff both canonical skeletons match exactly and the transforms agree
    numerically within ``tol`` (relative) at 5 points of the common strip."""
    strip = intersect_strips(e1.strip, e2.strip)
    u = _min_slope(e1, e2)
    if canonical(e1, u) != canonical(e2, u):
        return False
    for s in strip_points(strip):
        v1, v2 = eval_at(e1, s), eval_at(e2, s)
        if abs(v1 - v2) > tol * max(abs(v1), abs(v2)):
            return False
    return True


# ---------------------------------------------------------------------------
# necessary conditions


@dataclass(frozen=True)
class JansonReport:
    gamma_sum: Fraction
    delta_sum: Fraction
    passes: bool

    def to_dict(self) -> dict:
        return {
            "gamma_sum": str(self.gamma_sum),
            "delta_sum": str(self.delta_sum),
            "passes": self.passes,
        }


def janson_gate(e: MellinExpr) -> JansonReport:
    """Necessary condition for the expression to be the Mellin transform
    of a positive law: gamma > 0, or gamma = 0 and delta <= 0."""
    g = sum((abs(f.slope) for f in e.numer), Fraction(0)) - sum(
        (abs(f.slope) for f in e.denom), Fraction(0)
    )
    d = (
        sum((f.offset for f in e.numer), Fraction(0))
        - sum((f.offset for f in e.denom), Fraction(0))
        - Fraction(len(e.numer) - len(e.denom), 2)
    )
    return JansonReport(g, d, g > 0 or (g == 0 and d <= 0))


def log_convexity_probe(
    e: MellinExpr, center: Optional[float] = None, half_width: Optional[float] = None
) -> tuple[bool, float]:
    """Check s -> log E[X^s] for convexity on a 9-point stencil.

    Returns ``(ok, min_second_difference)``.  A non-positive transform value
    on the stencil also counts as a violation (reported as ``-inf``).
    """
    lo, hi = e.strip
    if center is None:
        pts = strip_points(e.strip, 9)
    else:
        if half_width is None:
            room = [abs(center - float(b)) for b in (lo, hi) if b is not None]
            half_width = 0.9 * min(room + [1.0])
        pts = [center + half_width * (k - 4) / 4 for k in range(9)]
    logs = []
    for s in pts:
        lv, sign = log_eval_at(e, s)
        if sign <= 0:
            return False, -math.inf
        logs.append(lv)
    h = pts[1] - pts[0]
    d2 = [(logs[i - 1] - 2 * logs[i] + logs[i + 1]) / h**2 for i in range(1, 8)]
    # allow for rounding in the log-gamma values
    slack = 1e-9 / h**2
    m = min(d2)
    return m >= -slack, m


# ---------------------------------------------------------------------------
# serialization


def _bound_str(b: Bound, inf: str) -> str:
    return inf if b is None else str(b)


def _parse_bound(v) -> Bound:
    if v is None or v in ("-inf", "inf", "+inf"):
        return None
    return to_rational(v)


def to_dict(e: MellinExpr) -> dict:
    return {
        "numer": [{"slope": str(f.slope), "offset": str(f.offset)} for f in e.numer],
        "denom": [{"slope": str(f.slope), "offset": str(f.offset)} for f in e.denom],
        "log_const": e.log_const,
        "log_scale": e.log_scale,
        "strip": [_bound_str(e.strip[0], "-inf"), _bound_str(e.strip[1], "inf")],
    }


def from_dict(d: dict) -> MellinExpr:
    try:
        return MellinExpr(
            tuple(GammaFactor(f["slope"], f["offset"]) for f in d["numer"]),
            tuple(GammaFactor(f["slope"], f["offset"]) for f in d["denom"]),
            float(d["log_const"]),
            float(d["log_scale"]),
            (_parse_bound(d["strip"][0]), _parse_bound(d["strip"][1])),
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise ParameterError(f"malformed Mellin expression: {exc}") from exc


def to_json(e: MellinExpr) -> str:
    return json.dumps(to_dict(e))


def from_json(text: str) -> MellinExpr:
    return from_dict(json.loads(text))
