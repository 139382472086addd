"""Exact checks of the combinatorial identities and factorial bounds.

Rational quantities are :class:`fractions.Fraction`; real-valued bounds are
compared in 256-bit mpmath arithmetic.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

import mpmath

from ..errors import ParameterError

_mp = mpmath.MPContext()
_mp.prec = 256


class IdentityCheck(NamedTuple):
    holds: bool
    lhs: Fraction
    rhs: Fraction


def rising_block(i: int, j: int) -> int:
    """(i+1)(i+2)...(i+j-1)."""
    return math.prod(range(i + 1, i + j))


def partial_sum_direct(j: int, m: int) -> Fraction:
    """sum_{i=j}^{m} 1 / ((i+1)(i+2)...(i+j-1)), summed term by term."""
    return sum((Fraction(1, rising_block(i, j)) for i in range(j, m + 1)), Fraction(0))


def partial_sum_closed_form(j: int, m: int) -> Fraction:
    """(1/(j-2)!) sum_{l=0}^{j-3} (-1)^l C(j-3, l) (1/(j+1+l) - 1/(m+2+l))."""
    total = Fraction(0)
    for l in range(j - 2):
        term = Fraction(1, j + 1 + l) - Fraction(1, m + 2 + l)
        total += (-1) ** l * math.comb(j - 3, l) * term
    return total / math.factorial(j - 2)


def partial_sum_identity_check(j: int, m: int) -> IdentityCheck:
    if j < 3 or m < j:
        raise ParameterError(f"need j >= 3 and m >= j, got j={j}, m={m}")
    lhs = partial_sum_direct(j, m)
    rhs = partial_sum_closed_form(j, m)
    return IdentityCheck(lhs == rhs, lhs, rhs)


def infinite_sum_closed_form(j: int) -> Fraction:
    """j! / ((j-2) (2j-2)!), the value of the full series from i = j."""
    if j < 3:
        raise ParameterError(f"need j >= 3, got {j}")
    return Fraction(math.factorial(j), (j - 2) * math.factorial(2 * j - 2))


def infinite_sum_bound_holds(j: int) -> bool:
    """j!/((j-2)(2j-2)!) <= e^2 j!/(j-2) (e/(2j))^(2j-2)."""
    mp = _mp
    value = infinite_sum_closed_form(j)
    lhs = mp.mpf(value.numerator) / value.denominator
    rhs = mp.e**2 * mp.mpf(math.factorial(j)) / (j - 2) * (mp.e / (2 * j)) ** (2 * j - 2)
    return bool(lhs <= rhs)


def generalized_binomial(a: int, l: int) -> Fraction:
    """a(a-1)...(a-l+1) / l!, defined for any integer a and l >= 0."""
    if l < 0:
        return Fraction(0)
    return Fraction(math.prod(a - q for q in range(l)), math.factorial(l))


def chu_vandermonde_check(a: int, b: int, c: int) -> IdentityCheck:
    """C(a+b, c) == sum_{l=0}^{c} C(a, l) C(b, c-l) with generalized binomials."""
    if c < 0:
        raise ParameterError("c must be non-negative")
    lhs = generalized_binomial(a + b, c)
    rhs = sum((generalized_binomial(a, l) * generalized_binomial(b, c - l) for l in range(c + 1)), Fraction(0))
    return IdentityCheck(lhs == rhs, lhs, rhs)


class StirlingCheck(NamedTuple):
    holds: bool
    values: tuple  # ((n/e)^n, sqrt(2 pi n)(n/e)^n, n!, e sqrt(n)(n/e)^n)


def stirling_bounds_check(n: int) -> StirlingCheck:
    """(n/e)^n <= sqrt(2 pi n)(n/e)^n <= n! <= e sqrt(n)(n/e)^n."""
    if n < 1:
        raise ParameterError("n must be a positive integer")
    mp = _mp
    power = mp.mpf(n) ** n
    base = power * mp.exp(-n)
    # e^(1-n) keeps the n = 1 upper bound exactly 1
    upper = mp.sqrt(n) * power * mp.exp(1 - n)
    values = (base, mp.sqrt(2 * mp.pi * n) * base, mp.mpf(math.factorial(n)), upper)
    holds = all(values[i] <= values[i + 1] for i in range(3))
    return StirlingCheck(bool(holds), values)
