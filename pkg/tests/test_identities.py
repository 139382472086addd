import itertools
import math
from fractions import Fraction

import pytest

from jigsawperc.analysis.identities import (
    chu_vandermonde_check,
    generalized_binomial,
    infinite_sum_bound_holds,
    infinite_sum_closed_form,
    partial_sum_direct,
    partial_sum_identity_check,
    stirling_bounds_check,
)
from jigsawperc.errors import ParameterError


def test_partial_sum_smallest_case():
    chk = partial_sum_identity_check(3, 3)
    assert chk.holds
    assert chk.lhs == chk.rhs == Fraction(1, 20)


@pytest.mark.parametrize("j", [4, 5, 6, 7, 8])
def test_partial_sum_long(j):
    assert partial_sum_identity_check(j, 200).holds


def test_partial_sum_range():
    with pytest.raises(ParameterError):
        partial_sum_identity_check(2, 5)
    with pytest.raises(ParameterError):
        partial_sum_identity_check(5, 4)


def test_closed_form_values():
    assert infinite_sum_closed_form(3) == Fraction(1, 4)
    assert infinite_sum_closed_form(4) == Fraction(1, 60)
    with pytest.raises(ParameterError):
        infinite_sum_closed_form(2)


def test_telescoping_limit_at_j3():
    # sum_{i>=3} 1/((i+1)(i+2)) telescopes to 1/4 - 1/(m+2)
    for m in (3, 10, 1000):
        assert partial_sum_direct(3, m) == Fraction(1, 4) - Fraction(1, m + 2)


@pytest.mark.parametrize("j", [4, 5, 6])
def test_partial_sums_converge(j):
    gap = infinite_sum_closed_form(j) - partial_sum_direct(j, 10**4)
    assert 0 <= gap < Fraction(1, 10**6)


def test_partial_sum_tail_at_j3_is_slow():
    # the j=3 tail is exactly 1/(m+2), about 1e-4 at m = 10^4
    gap = infinite_sum_closed_form(3) - partial_sum_direct(3, 10**4)
    assert gap == Fraction(1, 10**4 + 2)


def test_closed_form_bound():
    assert all(infinite_sum_bound_holds(j) for j in range(3, 41))


def test_generalized_binomial():
    assert generalized_binomial(5, 2) == 10
    assert generalized_binomial(-4, 3) == Fraction(-4 * -5 * -6, 6)
    assert generalized_binomial(3, 5) == 0
    for a, l in itertools.product(range(0, 9), range(0, 9)):
        assert generalized_binomial(a, l) == math.comb(a, l)


def test_chu_vandermonde_examples():
    chk = chu_vandermonde_check(2, 2, 2)
    assert chk.holds and chk.lhs == 6
    for b, c in itertools.product(range(-3, 6), range(0, 5)):
        assert chu_vandermonde_check(0, b, c).holds
    assert chu_vandermonde_check(-4, 6, 3).holds


def test_chu_vandermonde_grid():
    for a, b, c in itertools.product(range(-8, 9), range(-8, 9), range(0, 8)):
        assert chu_vandermonde_check(a, b, c).holds


def test_stirling():
    chk = stirling_bounds_check(1)
    assert chk.holds
    lo, mid, fact, hi = (float(v) for v in chk.values)
    assert lo == pytest.approx(math.exp(-1))
    assert mid == pytest.approx(math.sqrt(2 * math.pi) / math.e)
    assert fact == 1 and hi == 1
    assert stirling_bounds_check(10).holds
    assert all(stirling_bounds_check(n).holds for n in range(1, 101))
