"""Square classes and quadratic field arithmetic."""

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from ellcert.scalars import (
    QuadExt,
    SquareClassBasis,
    exponent_vector,
    squarefree_kernel,
)

nonzero_rationals = st.fractions(
    min_value=-10**6, max_value=10**6, max_denominator=10**4
).filter(lambda q: q != 0)


def test_kernel_examples():
    assert squarefree_kernel(12) == 3
    assert squarefree_kernel(-18) == -2
    assert squarefree_kernel(Fraction(8, 9)) == 2
    assert squarefree_kernel(1) == 1
    assert squarefree_kernel(Fraction(-1, 4)) == -1


def test_kernel_of_zero_rejected():
    with pytest.raises(ValueError):
        squarefree_kernel(0)


@given(nonzero_rationals)
def test_kernel_is_squarefree(q):
    k = squarefree_kernel(q)
    for p in range(2, 50):
        assert k % (p * p) != 0


@given(nonzero_rationals)
def test_value_over_kernel_is_square(q):
    ratio = q / squarefree_kernel(q)
    assert ratio > 0
    num, den = ratio.numerator, ratio.denominator
    import math
    assert math.isqrt(num) ** 2 == num
    assert math.isqrt(den) ** 2 == den


@given(nonzero_rationals, nonzero_rationals)
def test_kernel_multiplicative_up_to_squares(a, b):
    assert squarefree_kernel(a * b) == squarefree_kernel(
        squarefree_kernel(a) * squarefree_kernel(b)
    )


def test_exponent_vector_support():
    assert exponent_vector(1) == frozenset()
    assert exponent_vector(-1) == frozenset({-1})
    assert exponent_vector(30) == frozenset({2, 3, 5})
    assert exponent_vector(Fraction(-4, 3)) == frozenset({-1, 3})


def test_basis_accepts_disjoint_fields():
    basis = SquareClassBasis()
    for d in (3, 10, 29):
        assert basis.extend(d)
    assert basis.kernels == [3, 10, 29]


def test_basis_rejects_dependent_class():
    basis = SquareClassBasis([3, 10])
    # 12 and 3 generate the same field, and 30 = 3 * 10 modulo squares
    assert not basis.extend(12)
    assert not basis.extend(30)
    assert not basis.extend(1)
    assert len(basis) == 2


def test_basis_handles_sign_classes():
    basis = SquareClassBasis()
    assert basis.extend(-1)
    assert basis.extend(2)
    assert not basis.extend(-2)


def test_basis_constructor_rejects_dependence():
    with pytest.raises(ValueError):
        SquareClassBasis([3, 12])


@given(st.lists(st.integers(min_value=2, max_value=500), min_size=1, max_size=8))
def test_extend_matches_is_independent(values):
    basis = SquareClassBasis()
    for v in values:
        expected = basis.is_independent(v)
        assert basis.extend(v) == expected


def test_quadext_arithmetic():
    a = QuadExt(5, Fraction(1), Fraction(2))    # 1 + 2 sqrt(5)
    b = QuadExt(5, Fraction(3), Fraction(-1))   # 3 - sqrt(5)
    assert a + b == QuadExt(5, 4, 1)
    assert a * b == QuadExt(5, -7, 5)           # 3 - sqrt5 + 6 sqrt5 - 10
    assert a.conjugate() == QuadExt(5, 1, -2)
    assert a.norm() == Fraction(1 - 20)
    assert a.trace() == 2
    assert (a * a.inverse()) == QuadExt(5, 1, 0)


def test_quadext_rational_detection():
    r = QuadExt(7, Fraction(3, 2), Fraction(0))
    assert r.is_rational
    assert r.to_fraction() == Fraction(3, 2)
    assert QuadExt(7, 0, 1) == QuadExt(7, 0, 1)
    assert QuadExt(7, 1, 0) == Fraction(1)


def test_quadext_numeric_embedding():
    a = QuadExt(2, 1, 1)
    assert abs(a.to_mpf() - (1 + mpmath.sqrt(2))) < mpmath.mpf(10) ** -15


@given(st.integers(min_value=-20, max_value=20),
       st.integers(min_value=-20, max_value=20),
       st.integers(min_value=-20, max_value=20),
       st.integers(min_value=-20, max_value=20))
def test_quadext_norm_multiplicative(u1, v1, u2, v2):
    a = QuadExt(3, u1, v1)
    b = QuadExt(3, u2, v2)
    assert (a * b).norm() == a.norm() * b.norm()
