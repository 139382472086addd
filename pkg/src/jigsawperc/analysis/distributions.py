"""Finite discrete distributions on 0..max with exact or high-precision masses.

Binomial masses are exact rationals (a float p is converted exactly via
``Fraction(p)``).  Poisson-derived masses are 128-bit mpmath floats computed
in log space.  Stochastic domination is checked by comparing every upper
tail P[X >= r].
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from fractions import Fraction
from typing import NamedTuple, Sequence

import mpmath

DOMINATION_TOL = 1e-12

_mp = mpmath.MPContext()
_mp.prec = 128


class DiscreteDist:
    """Distribution of a random variable taking values 0..len(masses)-1."""

    __slots__ = ("masses", "exact")

    def __init__(self, masses: Sequence):
        masses = tuple(masses)
        if not masses:
            raise ValueError("a distribution needs at least one support point")
        self.exact = all(isinstance(m, (Fraction, int)) for m in masses)
        if self.exact:
            masses = tuple(Fraction(m) for m in masses)
        else:
            masses = tuple(_mp.mpf(m.numerator) / m.denominator if isinstance(m, Fraction) else _mp.mpf(m) for m in masses)
        if any(m < 0 for m in masses):
            raise ValueError("masses must be non-negative")
        self.masses = masses

    @property
    def max(self) -> int:
        return len(self.masses) - 1

    def pmf(self, t: int):
        return self.masses[t] if 0 <= t < len(self.masses) else self._zero

    def cdf(self, t: int):
        """P[X <= t]."""
        if t < 0:
            return self._zero
        return sum(self.masses[: t + 1], self._zero)

    def tail(self, r: int):
        """P[X >= r]."""
        return sum(self.masses[max(r, 0):], self._zero)

    def tails(self) -> list:
        """[P[X >= r] for r = 0..max+1], accumulated once from the top."""
        out = [self._zero]
        for m in reversed(self.masses):
            out.append(out[-1] + m)
        return out[::-1]

    def total(self):
        return sum(self.masses, self._zero)

    def mean(self):
        return sum((t * m for t, m in enumerate(self.masses)), self._zero)

    @property
    def _zero(self):
        return Fraction(0) if self.exact else _mp.mpf(0)

    def __repr__(self):
        kind = "exact" if self.exact else "mp"
        return f"DiscreteDist(max={self.max}, {kind})"


def point_mass(t: int = 0) -> DiscreteDist:
    return DiscreteDist([Fraction(0)] * t + [Fraction(1)])


@lru_cache(maxsize=64)
def make_binomial(N: int, p) -> DiscreteDist:
    if N < 0:
        raise ValueError("N must be non-negative")
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    q = 1 - p
    return DiscreteDist([math.comb(N, t) * p**t * q ** (N - t) for t in range(N + 1)])


def poisson_log_mass(lam, t: int):
    lam = _mp.mpf(lam)
    return -lam + t * _mp.log(lam) - _mp.loggamma(t + 1)


def make_truncated_poisson(lam, r: int) -> DiscreteDist:
    """Po(lam) conditioned on being at most r."""
    if lam < 0 or r < 0:
        raise ValueError("need lam >= 0 and r >= 0")
    if lam == 0:
        return DiscreteDist([_mp.mpf(1)] + [_mp.mpf(0)] * r)
    weights = [_mp.exp(poisson_log_mass(lam, t)) for t in range(r + 1)]
    norm = _mp.fsum(weights)
    return DiscreteDist([w / norm for w in weights])


def cutoff(x: DiscreteDist, r: int) -> DiscreteDist:
    """The cutoff transform: x conditioned on x <= r."""
    head = x.masses[: r + 1]
    norm = sum(head, x._zero)
    if norm == 0:
        raise ValueError("cutoff of a variable with P[X <= r] = 0")
    return DiscreteDist([m / norm for m in head])


def convolve(x: DiscreteDist, y: DiscreteDist) -> DiscreteDist:
    """Distribution of X + Y for independent X, Y."""
    exact = x.exact and y.exact
    zero = Fraction(0) if exact else _mp.mpf(0)
    out = [zero] * (x.max + y.max + 1)
    for (i, a), (j, b) in itertools.product(enumerate(x.masses), enumerate(y.masses)):
        out[i + j] += a * b if exact else _mp.mpf(a) * _mp.mpf(b)
    return DiscreteDist(out)


def _as_mp(v):
    return _mp.mpf(v.numerator) / v.denominator if isinstance(v, Fraction) else _mp.mpf(v)


def dominates(x: DiscreteDist, y: DiscreteDist, tol: float = DOMINATION_TOL) -> bool:
    """True when P[X >= r] >= P[Y >= r] for every r.

    Exact distributions are compared exactly; otherwise a violation must
    exceed ``tol`` to count.
    """
    size = max(x.max, y.max) + 2
    zx, zy = x._zero, y._zero
    xt = x.tails() + [zx] * (size - x.max - 2)
    yt = y.tails() + [zy] * (size - y.max - 2)
    both_exact = x.exact and y.exact
    for tx, ty in zip(xt, yt):
        if both_exact:
            if tx < ty:
                return False
        elif _as_mp(tx) < _as_mp(ty) - tol:
            return False
    return True


class DominationCell(NamedTuple):
    params: tuple
    holds: bool


def binomial_vs_cutoff_poisson(N: int, p, theta, r: int) -> bool:
    """Bi(N, p) dominates Po_{<=r}((1 - theta) N p); meaningful when r/N < theta < 1."""
    lam = (1 - Fraction(theta)) * N * Fraction(p)
    return dominates(make_binomial(N, p), make_truncated_poisson(_as_mp(lam), r))


def cutoff_poisson_sum(lam, mu, r: int) -> bool:
    """Po_{<=r}(lam) + Po_{<=r}(mu) dominates Po_{<=r}(lam + mu)."""
    lhs = convolve(make_truncated_poisson(lam, r), make_truncated_poisson(mu, r))
    return dominates(lhs, make_truncated_poisson(_mp.mpf(lam) + _mp.mpf(mu), r))


def binomial_domination_grid(Ns=(10, 20, 50), ps=(0.05, 0.2), thetas=(0.3, 0.6)) -> list[DominationCell]:
    cells = []
    for N, p, theta in itertools.product(Ns, ps, thetas):
        # all integer cutoffs with r / N < theta
        for r in range(math.ceil(theta * N)):
            if Fraction(r, N) < Fraction(theta):
                cells.append(DominationCell((N, p, theta, r), binomial_vs_cutoff_poisson(N, p, theta, r)))
    return cells


def poisson_sum_grid(lams=(0.5, 1, 2), mus=(0.5, 1, 2), rs=(2, 5, 10)) -> list[DominationCell]:
    return [
        DominationCell((lam, mu, r), cutoff_poisson_sum(lam, mu, r))
        for lam, mu, r in itertools.product(lams, mus, rs)
    ]
