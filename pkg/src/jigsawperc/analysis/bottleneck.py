"""Smallest positive root of 2xN e^{-xN} = n^{-1/x}.

The root predicts the size of the largest cluster below the threshold.  At
N = 1/(4 ln n) the two sides touch with a triple root at x = 2 ln n, so the
sign is evaluated through the log ratio in 256-bit arithmetic.  The root is
also ill-conditioned in N there: rounding N to a double moves it by about
(1e-16)^(1/3) x, roughly 1e-4, so callers who need the threshold root to high
accuracy should pass N as an mpmath number or a Fraction (see
:func:`threshold_N`).
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple, Optional

import mpmath

from ..errors import ParameterError

GRID_POINTS = 2**12
BISECTION_STEPS = 200
# the grid starts this many decades below the top of the bracket
GRID_DECADES = 8

_mp = mpmath.MPContext()
_mp.prec = 256


class NoRootError(ParameterError):
    """No + to - sign change was found in the search bracket."""


class BottleneckReport(NamedTuple):
    found: bool
    root: Optional[float]
    residual: Optional[float]
    bracket: tuple[float, float]


def _to_mp(v):
    if isinstance(v, Fraction):
        return _mp.mpf(v.numerator) / v.denominator
    return _mp.mpf(v)


def bottleneck_residual(x, N, n):
    """2xN e^{-xN} - n^{-1/x}, evaluated in high precision."""
    x, N, n = _to_mp(x), _to_mp(N), _to_mp(n)
    return 2 * x * N * _mp.exp(-x * N) - _mp.exp(-_mp.log(n) / x)


def _log_ratio(x, N, logn):
    # ln(2xN e^{-xN}) - ln(n^{-1/x}); same sign as the residual
    return _mp.log(2 * x * N) - x * N + logn / x


def bottleneck_report(N, n, grid_points: int = GRID_POINTS,
                      steps: int = BISECTION_STEPS) -> BottleneckReport:
    if not N > 0 or not n > 1:  # works for float, Fraction and mpf alike
        raise ParameterError(f"need N > 0 and n > 1, got N={N}, n={n}")
    N_ = _to_mp(N)
    logn = _mp.log(_to_mp(n))
    hi = 4 * logn
    lo = hi * _mp.mpf(10) ** (-GRID_DECADES)
    ratio = (hi / lo) ** (_mp.mpf(1) / (grid_points - 1))
    bracket = (float(lo), float(hi))

    prev_x = lo
    prev = _log_ratio(lo, N_, logn)
    x = lo
    for _ in range(1, grid_points):
        x = x * ratio
        cur = _log_ratio(x, N_, logn)
        if prev > 0 and cur <= 0:
            break
        prev_x, prev = x, cur
    else:
        return BottleneckReport(False, None, None, bracket)

    a, b = prev_x, x
    if cur == 0:
        a = b
    for _ in range(steps):
        if a == b:
            break
        mid = (a + b) / 2
        if _log_ratio(mid, N_, logn) > 0:
            a = mid
        else:
            b = mid
    root = float((a + b) / 2)
    # residual at the value actually returned
    residual = bottleneck_residual(root, N_, n)
    return BottleneckReport(True, root, float(residual), bracket)


def bottleneck_root(N, n, **kwargs) -> float:
    """Smallest positive x with 2xN e^{-xN} = n^{-1/x}.

    Scans x in (0, 4 ln n] on a geometric grid for the first sign change
    from + to -, then bisects.  Raises :class:`NoRootError` when the grid
    shows no sign change (for instance well above the threshold).
    """
    report = bottleneck_report(N, n, **kwargs)
    if not report.found:
        raise NoRootError(f"no root of the bottleneck equation in {report.bracket} for N={N}, n={n}")
    return report.root


def threshold_N(n, c=1):
    """N = n p1 p2 on the curve p1 p2 = c / (4 n ln n), as a 256-bit number."""
    return _to_mp(c) / (4 * _mp.log(_to_mp(n)))
