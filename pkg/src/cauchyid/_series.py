"""Power-series engine shared by the Mittag-Leffler and Wright evaluators.

Both functions are entire series ``sum_n c_n w**n`` with coefficients
whose logarithms are cheap to compute.  The engine evaluates them either
in double precision with compensated summation or, when cancellation
would destroy the double result, in multi-precision with a working
precision sized from the magnitude of the largest term.
"""

from __future__ import annotations

import math
from typing import Callable

import mpmath
import numpy as np

EPS = np.finfo(float).eps
# log(max term) - log(term) beyond which the series is cut
_CUT = 46.0
_CHUNK = 128
_N_MAX = 200_000


class PowerSeries:
    """Lazily extended coefficient tables for ``sum_n c_n w**n``.

    ``log_coeff(n)`` returns ``(log|c_n|, sign(c_n))`` for an integer array
    ``n``; ``mp_coeff(n)`` returns ``c_n`` as an mpmath number at the
    current working precision.
    """

    def __init__(
        self,
        log_coeff: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]],
        mp_coeff: Callable[[int], mpmath.mpf],
    ):
        self._log_coeff = log_coeff
        self._mp_coeff = mp_coeff
        self._lc = np.empty(0)
        self._sg = np.empty(0)
        self._mp_dps = 0
        self._mp_table: list = []

    def _ensure(self, n: int) -> None:
        have = self._lc.size
        if n <= have:
            return
        new = max(n, 2 * have, _CHUNK)
        idx = np.arange(have, new)
        lc, sg = self._log_coeff(idx)
        self._lc = np.concatenate([self._lc, lc])
        self._sg = np.concatenate([self._sg, sg])

    def term_profile(self, logx: float, cut: float = _CUT) -> tuple[int, float, float]:
        """Return ``(n_terms, log_max_term, log_sum_abs)`` for ``|w| = exp(logx)``.

        Terms after ``n_terms`` are below ``exp(-cut)`` times the largest one.
        """
        n = _CHUNK
        while True:
            self._ensure(n)
            lt = self._lc[:n] + np.arange(n) * logx
            lmax = float(np.max(lt))
            if not math.isfinite(lmax):
                return 1, -math.inf, -math.inf
            above = np.nonzero(lt > lmax - cut)[0]
            last = int(above[-1])
            if last + 16 < n:
                nt = last + 1
                seg = lt[:nt]
                seg = seg[np.isfinite(seg)]
                ls = lmax + math.log(float(np.sum(np.exp(seg - lmax))))
                return nt, lmax, ls
            if n >= _N_MAX:
                raise OverflowError("series needs too many terms")
            n *= 2

    def eval_float(self, w: float) -> tuple[float, float, int]:
        """Double-precision sum.  Returns ``(value, abs_err, n_terms)``."""
        if w == 0.0:
            self._ensure(1)
            return float(self._sg[0] * math.exp(self._lc[0])), 0.0, 1
        logx = math.log(abs(w))
        nt, lmax, ls = self.term_profile(logx)
        if ls > 700:
            raise OverflowError("series magnitude overflows double precision")
        n = np.arange(nt)
        mag = np.exp(self._lc[:nt] + n * logx)
        sgn = self._sg[:nt] * (np.sign(w) ** n)
        terms = sgn * mag
        value = math.fsum(terms.tolist())
        s_abs = float(np.sum(mag))
        # truncation: remaining terms are below e^-_CUT * max and decay super-geometrically
        tail = 2.0 * math.exp(lmax - _CUT)
        err = 10.0 * EPS * s_abs + tail
        return value, err, nt

    def _mp_coeffs(self, dps: int, n: int) -> list:
        # one table, reused at any lower precision; grow the precision
        # geometrically so a scan over increasing |w| rebuilds it rarely
        if dps > self._mp_dps:
            self._mp_dps = max(dps, 20 * ((3 * self._mp_dps // 2 + 19) // 20))
            self._mp_table = []
        lst = self._mp_table
        if len(lst) < n:
            with mpmath.workdps(self._mp_dps):
                for k in range(len(lst), n):
                    lst.append(self._mp_coeff(k))
        return lst

    def eval_mp(self, w: float, dps: int | None = None) -> tuple[float, float, int]:
        """Multi-precision sum with precision sized from the term profile."""
        logx = math.log(abs(w))
        _, _, ls0 = self.term_profile(logx)
        lost = max(0.0, ls0 / math.log(10))
        if dps is None:
            dps = int(math.ceil(lost)) + 30
            dps = 20 * ((dps + 19) // 20)
        cut = (dps - 2) * math.log(10)
        nt, lmax, ls = self.term_profile(logx, cut)
        coeffs = self._mp_coeffs(dps, nt)
        with mpmath.workdps(dps):
            wm = mpmath.mpf(w)
            acc = mpmath.mpf(0)
            pw = mpmath.mpf(1)
            for k in range(nt):
                acc += coeffs[k] * pw
                pw *= wm
            value = float(acc)
            # working-precision rounding on every term plus the truncated tail
            err_mp = nt * mpmath.mpf(10) ** (-dps) * mpmath.exp(ls) + 2 * mpmath.exp(
                lmax - cut
            )
        err = EPS * abs(value) + float(err_mp)
        return value, err, dps
