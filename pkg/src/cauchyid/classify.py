"""Existence and non-negativity classifiers with rule provenance.

The boundary function f of the admissible domain is unknown in closed form;
it is represented only by the certified bounds L < f < U.  Whenever a
decision would need f itself the classifier returns ``Unknown`` together
with the interval that is known to contain the critical threshold.

All comparisons are carried out on exact rationals (floats are read via
their repr), so ties such as ``c == 3a + b`` are resolved exactly as the
inequalities are written.  Near-ties (relative 1e-12) are flagged.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import ConsistencyError, ParameterError
from .mellin import expr_X, janson_gate, to_rational

EXISTS = "Exists"
NOT_EXISTS = "NotExists"
UNKNOWN = "Unknown"

_TIE_REL = 1e-12


@dataclass(frozen=True)
class DomainBounds:
    rho: float
    L_val: float
    U_val: float

    def to_dict(self) -> dict:
        return {"rho": self.rho, "L": self.L_val, "U": self.U_val}


def _L(rho: Fraction) -> Fraction:
    if rho < Fraction(3, 2):
        r = float(rho)
        val = r + math.exp(-math.pi / math.tan(math.pi * (1.0 - 1.0 / r)))
        return Fraction(val)
    return 3 * (rho - 1) + Fraction(7, 10) * (2 - rho) ** 2


def _U(rho: Fraction) -> Fraction:
    if rho < Fraction(3, 2):
        return 4 * rho / 3
    return 2 * rho - 1


def bounds_LU(rho) -> DomainBounds:
    r = to_rational(rho)
    if not 1 < r < 2:
        raise ParameterError("L and U are defined for 1 < rho < 2 only")
    return DomainBounds(float(r), float(_L(r)), float(_U(r)))


def f_value_or_bounds(rho) -> tuple[Fraction, Fraction]:
    """Interval known to contain f(rho); degenerate at rho = 1 and rho = 2."""
    r = to_rational(rho)
    if r == 1:
        return Fraction(1), Fraction(1)
    if r == 2:
        return Fraction(3), Fraction(3)
    if not 1 < r < 2:
        raise ParameterError("f is defined on [1, 2]")
    return _L(r), _U(r)


@dataclass(frozen=True)
class Verdict:
    outcome: str
    rule: str
    band: Optional[tuple[float, float]] = None
    boundary: bool = False
    inputs: dict = field(default_factory=dict)
    note: str = ""

    @property
    def certified(self) -> bool:
        return self.outcome != UNKNOWN

    def to_dict(self) -> dict:
        d = {"outcome": self.outcome, "rule": self.rule, "inputs": self.inputs}
        if self.band is not None:
            d["band"] = [self.band[0], self.band[1]]
        d["boundary"] = self.boundary
        if self.note:
            d["note"] = self.note
        return d


class _Ties:
    """Records whether any comparison made so far was within rounding of a tie."""

    def __init__(self):
        self.hit = False

    def __call__(self, x: Fraction, y: Fraction) -> tuple[Fraction, Fraction]:
        if abs(x - y) <= _TIE_REL * max(abs(x), abs(y), 1):
            self.hit = True
        return x, y


def _positive(**kw) -> dict[str, Fraction]:
    out = {}
    for k, v in kw.items():
        r = to_rational(v)
        if r <= 0:
            raise ParameterError(f"{k} must be positive, got {v}")
        out[k] = r
    return out


def _inputs(**kw) -> dict:
    return {k: float(v) for k, v in kw.items()}


# ---------------------------------------------------------------------------
# two-parameter Mittag-Leffler domain


def classify_two_param(rho, mu) -> Verdict:
    """Is (rho, mu) in the domain where E_{rho,mu}(-x) >= 0 for x >= 0?

    ``Exists`` means non-negative (in the domain), ``NotExists`` that the
    function takes negative values.
    """
    p = _positive(rho=rho, mu=mu)
    r, m = p["rho"], p["mu"]
    inputs = _inputs(rho=r, mu=m)
    tie = _Ties()

    def v(outcome, rule, band=None):
        return Verdict(outcome, rule, band, tie.hit, inputs)

    if r > 2:
        return v(NOT_EXISTS, "rho>2")
    if r <= 1:
        x, y = tie(m, r)
        return v(EXISTS, "rho<=1,mu>=rho") if x >= y else v(NOT_EXISTS, "mu<rho")
    if r == 2:
        x, y = tie(m, Fraction(3))
        return v(EXISTS, "rho=2,mu>=3") if x >= y else v(NOT_EXISTS, "rho=2,mu<3")
    lo, up = _L(r), _U(r)
    x, y = tie(m, lo)
    if x <= y:
        return v(NOT_EXISTS, "mu<=L")
    x, y = tie(m, up)
    if x >= y:
        return v(EXISTS, "mu>=U")
    return v(UNKNOWN, "f-band", (float(lo), float(up)))


# ---------------------------------------------------------------------------
# X_{a,b,c,d}


def _ii3(a, b, c, d, tie) -> bool:
    x, y = tie(2 * c / d, 3 * a + b)
    if x < y:
        return False
    k = c / d - a
    x, y = tie(2 * k * (k + Fraction(1, 2)), a + b)
    return k > 0 and x >= y


def _ii3_threshold(a: Fraction, b: Fraction, d: Fraction) -> float:
    """Smallest c for which the sufficient pair holds."""
    y_star = (-0.5 + math.sqrt(0.25 + 2 * float(a + b))) / 2
    return float(d) * max(float(3 * a + b) / 2, float(a) + y_star)


def _classify_positive_d(a, b, c, d, inputs) -> Verdict:
    tie = _Ties()

    def v(outcome, rule, band=None, note=""):
        return Verdict(outcome, rule, band, tie.hit, inputs, note)

    s = a + b
    if d > 2:
        return v(NOT_EXISTS, "I.1")
    x, y = tie(c, a * d)
    if x < y:
        return v(NOT_EXISTS, "I.2")
    if d == 2:
        x, y = tie(3 * a + b, c)
        if x > y:
            return v(NOT_EXISTS, "I.3")
    if d <= 1:
        return v(EXISTS, "II.1")
    if d == 2 and s >= 1:
        tie(s, Fraction(1))
        # c >= 3a + b already holds here
        return v(EXISTS, "Prop-d2-iff")
    if _ii3(a, b, c, d, tie):
        return v(EXISTS, "II.3")
    if d == 2:
        # f(2) = 3 is exact: II(2) reads c >= 2a + 1 when a + b <= 1
        x, y = tie(c, 2 * a + 1)
        if s <= 1 and x >= y:
            return v(EXISTS, "II.2")
        return v(UNKNOWN, "open-region", note="d=2, a+b<1: between the necessary and sufficient conditions")
    lo = a * d - d + _L(d)
    up = a * d - d + _U(d)
    tie(s, Fraction(1))
    x, y = tie(c, lo)
    if s >= 1 and x < y:
        return v(NOT_EXISTS, "I.4")
    x, y = tie(c, up)
    if s <= 1 and x >= y:
        return v(EXISTS, "II.2")
    hi = min(float(up), _ii3_threshold(a, b, d))
    return v(UNKNOWN, "f-band", (float(lo), hi), note="the critical c = ad - d + f(d) lies in the band")


def classify_existence(a, b, c, d) -> Verdict:
    """Decide whether X_{a,b,c,d} exists.

    Rules are tried in a fixed order: hard non-existence (I.1, I.2, I.3),
    sufficient d <= 1 (II.1), the exact d = 2 criterion for a + b >= 1,
    the sufficient pair II.3, then the f-dependent rules I.4 / II.2 using
    L and U in place of f.  Negative d goes through X_{a,b,c,d} = 1/X_{b,a,c,-d}.
    """
    p = _positive(a=a, b=b, c=c)
    d = to_rational(d)
    if d == 0:
        raise ParameterError("d must be non-zero")
    a, b, c = p["a"], p["b"], p["c"]
    inputs = _inputs(a=a, b=b, c=c, d=d)
    if d < 0:
        inner = _classify_positive_d(b, a, c, -d, inputs)
        verdict = Verdict(
            inner.outcome,
            inner.rule,
            inner.band,
            inner.boundary,
            inputs,
            ("via inversion X_{b,a,c,-d}^{-1}; " + inner.note).rstrip("; "),
        )
        gate_expr = expr_X(b, a, c, -d)
    else:
        verdict = _classify_positive_d(a, b, c, d, inputs)
        gate_expr = expr_X(a, b, c, d)
    if verdict.outcome == EXISTS and not janson_gate(gate_expr).passes:
        raise ConsistencyError(f"rule {verdict.rule} claims existence but janson_gate fails: {inputs}")
    return verdict


# ---------------------------------------------------------------------------
# three-parameter Mittag-Leffler non-negativity


def classify_ml_nonneg(rho, mu, gamma=1.0) -> Verdict:
    """Sign of E^gamma_{rho,mu}(-t), t > 0.

    ``Exists`` reads as non-negative, ``NotExists`` as taking negative values.
    Conditions are transcribed directly in (rho, mu, gamma); f is replaced
    by L and U as in :func:`classify_existence`.
    """
    if hasattr(rho, "rho") and hasattr(rho, "mu"):
        rho, mu, gamma = rho.rho, rho.mu, rho.gamma
    p = _positive(rho=rho, mu=mu, gamma=gamma)
    r, m, g = p["rho"], p["mu"], p["gamma"]
    inputs = _inputs(rho=r, mu=m, gamma=g)
    tie = _Ties()

    def v(outcome, rule, band=None, note=""):
        return Verdict(outcome, rule, band, tie.hit, inputs, note)

    if r > 2:
        return v(NOT_EXISTS, "I.1")
    x, y = tie(m, g * r)
    if x < y:
        return v(NOT_EXISTS, "I.2")
    if r == 2:
        x, y = tie(m, 3 * g)
        if x < y:
            return v(NOT_EXISTS, "I.3")
    if r <= 1:
        return v(EXISTS, "II.1")
    x, y = tie(2 * m, 3 * g * r)
    k = m / r - g
    if x >= y:
        x, y = tie(2 * k * (k + Fraction(1, 2)), g)
        if x >= y:
            return v(EXISTS, "II.3")
    if r == 2:
        x, y = tie(m, 2 * g + 1)
        if g <= 1 and x >= y:
            return v(EXISTS, "II.2")
        return v(UNKNOWN, "open-region", note="rho=2, gamma<1: between the necessary and sufficient conditions")
    lo = g * r + _L(r) - r
    up = g * r + _U(r) - r
    tie(g, Fraction(1))
    x, y = tie(m, lo)
    if g >= 1 and x < y:
        return v(NOT_EXISTS, "I.4")
    x, y = tie(m, up)
    if g <= 1 and x >= y:
        return v(EXISTS, "II.2")
    # II.3 threshold in mu: rho * max(3 gamma / 2, gamma + y*)
    y_star = (-0.5 + math.sqrt(0.25 + 2 * float(g))) / 2
    hi = min(float(up), float(r) * max(1.5 * float(g), float(g) + y_star))
    return v(UNKNOWN, "f-band", (float(lo), hi), note="the critical mu = gamma rho - rho + f(rho) lies in the band")


# ---------------------------------------------------------------------------
# two-denominator family


def ksw_D_exists(a, b, c, d) -> Verdict:
    """Existence of the law with moments Gamma(a+s)Gamma(b-s)/(Gamma(c+s)Gamma(d+s))."""
    p = _positive(a=a, b=b, c=c, d=d)
    a, b, c, d = p["a"], p["b"], p["c"], p["d"]
    inputs = _inputs(a=a, b=b, c=c, d=d)
    tie = _Ties()
    half = Fraction(1, 2)
    x1, y1 = tie(c + d, 3 * a + b + half)
    x2, y2 = tie(min(c, d), a)
    if x2 <= y2:
        return Verdict(NOT_EXISTS, "KSW.b:min(c,d)<=a", None, tie.hit, inputs)
    if x1 < y1:
        return Verdict(NOT_EXISTS, "KSW.b:c+d<3a+b+1/2", None, tie.hit, inputs)
    x, y = tie(2 * (c - a) * (d - a), a + b)
    if x >= y:
        return Verdict(EXISTS, "KSW.a", None, tie.hit, inputs)
    return Verdict(UNKNOWN, "KSW-gap", None, tie.hit, inputs)


# ---------------------------------------------------------------------------
# region maps


@dataclass(frozen=True)
class RegionCell:
    rho: float
    mu: float
    gamma: Optional[float]
    verdict: Verdict
    numeric_min: Optional[float] = None
    numeric_label: str = ""

    def to_dict(self) -> dict:
        return {
            "rho": self.rho,
            "mu": self.mu,
            "gamma": self.gamma,
            "verdict": self.verdict.to_dict(),
            "numeric_min": self.numeric_min,
            "numeric_label": self.numeric_label,
        }


def _axis(lo: float, hi: float, step: float) -> list[float]:
    if step <= 0:
        raise ParameterError("step must be positive")
    if hi < lo:
        raise ParameterError("empty range")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + k * step, 12) for k in range(n)]


def _cell(rho: float, mu: float, gamma: Optional[float], scan: bool, t_max: float) -> RegionCell:
    if gamma is None:
        verdict = classify_two_param(rho, mu)
    else:
        verdict = classify_ml_nonneg(rho, mu, gamma)
    nmin, label = None, ""
    if scan and verdict.outcome == UNKNOWN:
        from .specfun import MLParams, sign_scan

        rep = sign_scan(MLParams(rho, mu, 1.0 if gamma is None else gamma), t_max)
        nmin = rep.min_value
        label = "numeric-only:" + ("negative" if rep.certified else "no-negativity-found")
    return RegionCell(rho, mu, gamma, verdict, nmin, label)


def region_map(
    rho_range: Sequence[float],
    mu_range: Sequence[float],
    step: float,
    gamma: Optional[float] = None,
    scan: bool = True,
    t_max: float = 100.0,
    threads: Optional[int] = None,
) -> list[list[RegionCell]]:
    """Row-major grid of verdicts (rows indexed by rho).

    Unknown cells are annotated with a sign scan of the Mittag-Leffler
    function; that label is numerical evidence only.
    """
    rhos = _axis(rho_range[0], rho_range[1], step)
    mus = _axis(mu_range[0], mu_range[1], step)

    def row(r):
        return [_cell(r, m, gamma, scan, t_max) for m in mus]

    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(row, rhos))


def region_map_csv(grid: list[list[RegionCell]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["rho", "mu", "gamma", "outcome", "rule", "numeric_min"])
    for row in grid:
        for c in row:
            w.writerow(
                [
                    f"{c.rho:.12g}",
                    f"{c.mu:.12g}",
                    "" if c.gamma is None else f"{c.gamma:.12g}",
                    c.verdict.outcome,
                    c.verdict.rule,
                    "" if c.numeric_min is None else f"{c.numeric_min:.12g}",
                ]
            )
    return buf.getvalue()
