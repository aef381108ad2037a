import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from homtest import bounds as B
from homtest.errors import OutOfTheoremRange


@given(st.fractions(min_value=0, max_value=50, max_denominator=10**6), st.integers(1, 9))
def test_root_enclosure(x, n):
    lo, hi = B.root_bounds(x, n)
    assert lo <= hi
    assert lo**n <= x <= hi**n
    assert float(hi - lo) < 1e-20 + 1e-25 * float(x + 1)


def test_root_exact_and_negative():
    assert B.root_bounds(Fraction(8, 27), 3) == (Fraction(2, 3), Fraction(2, 3))
    lo, hi = B.root_bounds(Fraction(-8, 27), 3)
    assert lo == hi == Fraction(-2, 3)
    with pytest.raises(ValueError):
        B.root_bounds(Fraction(-1, 2), 2)


def test_zeta_enclosures():
    for s, true in ((2, math.pi**2 / 6), (3, 1.2020569031595942), (4, math.pi**4 / 90)):
        lo, hi = B.zeta_bounds(s)
        assert lo <= Fraction(true) <= hi or abs(float(lo) - true) < 1e-15
        assert float(hi - lo) < 1e-6
    lo, hi = B.zeta2_squared_bounds()
    assert float(lo) <= math.pi**4 / 36 + 1e-15 and float(hi) >= math.pi**4 / 36 - 1e-15


def test_completeness_lower_bounds():
    # delta = 1 on a codeword
    b = B.bounded_rank_cyclic(3, 1, 4, 1)
    assert b.lower == Fraction(2, 3) and b.upper == 1 or b.upper >= 1
    assert B.vector_space(2, 3, 1).lower == 1
    assert B.vector_space(3, 5, 1).lower == 1
    assert B.dihedral(3, 1, 2, 2).lower == Fraction(1, 2)


def test_vector_space_negative_branch():
    b = B.vector_space(2, 5, Fraction(1, 4))
    assert b.lower == 0
    assert b.upper < Fraction(1, 2)


@pytest.mark.parametrize("fn,args", [
    (B.bounded_rank_cyclic, (3, 2, 3)),
    (B.general_cyclic, (3,)),
    (B.vector_space, (2, 4)),
    (B.field_to_space, (2, 1)),
    (B.dihedral, (2,)),
])
def test_out_of_range(fn, args):
    with pytest.raises(OutOfTheoremRange):
        if fn is B.dihedral:
            fn(*args, Fraction(1, 2), 10, 10)
        else:
            fn(*args, Fraction(1, 2))


@given(st.fractions(min_value=0, max_value=1, max_denominator=1000), st.integers(4, 8))
def test_general_cyclic_ordering(d, k):
    b = B.general_cyclic(k, d)
    assert 0 <= b.lower <= b.upper


def test_list_size_bounds():
    assert B.list_size_bound(3, 1, Fraction(3, 10)) == Fraction(3, 2) / Fraction(9, 100)
    assert B.list_size_bound(3, 1, Fraction(3, 10)) == Fraction(50, 3)
    assert B.list_size_bound_two(Fraction(1, 2)) == 8
    assert B.list_size_bound_general(Fraction(1, 2)) >= Fraction(8) * Fraction(int(math.pi**4 / 36 * 10**6), 10**6)


def test_fraction_text():
    assert B.fraction_text(Fraction(3)) == "3"
    assert B.fraction_text(Fraction(6, 4)) == "3/2"
