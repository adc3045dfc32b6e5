"""Quadratic pencils: construction, minimal rank and isotropic search."""

import random
from fractions import Fraction

import sympy

from ellcert.curves import WeierstrassCurve
from ellcert.funcfield import coordinates_in_basis, ff_derivative, rr_basis
from ellcert.pencil import (
    build_pencil,
    derivation_matrix,
    exactness_functionals,
    isotropic_candidates,
    isotropic_search,
    min_rank_of_pencil,
    quadratic_value,
)

CURVE = WeierstrassCurve(0, 17)
POINT = CURVE.point(2, 5)

FROZEN_PHI1 = [
    ["-13/5", "0", "51/5"],
    ["0", "204/25", "0"],
    ["51/5", "0", "-663/25"],
]
FROZEN_PHI2 = [
    ["-6/5", "-13/5", "0"],
    ["-13/5", "0", "51/7"],
    ["0", "51/7", "-306/35"],
]


def test_derivation_matrix_shape_and_kernel():
    n = 8
    matrix = derivation_matrix(CURVE, n)
    assert len(matrix) == n + 1 and all(len(row) == n for row in matrix)
    # only constants die under the derivative, so the rank is n - 1
    assert sympy.Matrix([[sympy.Rational(c) for c in row] for row in matrix]).rank() == n - 1


def test_functionals_annihilate_derivatives():
    n = 8
    lam1, lam2 = exactness_functionals(CURVE, n)
    rng = random.Random(3)
    basis = rr_basis(CURVE, n)
    for _ in range(40):
        vec = [Fraction(rng.randrange(-9, 10), rng.randrange(1, 5)) for _ in basis]
        g = sum((c * b for c, b in zip(vec, basis)), start=0 * basis[0])
        coords = coordinates_in_basis(ff_derivative(g), n + 1)
        assert sum(a * b for a, b in zip(lam1, coords)) == 0
        assert sum(a * b for a, b in zip(lam2, coords)) == 0


def test_pencil_frozen_forms_for_n8():
    pencil = build_pencil(CURVE, POINT, 8)
    assert pencil.nu == 3
    assert pencil.phi1 == [[Fraction(c) for c in row] for row in FROZEN_PHI1]
    assert pencil.phi2 == [[Fraction(c) for c in row] for row in FROZEN_PHI2]


def test_pencil_min_ranks():
    p8 = build_pencil(CURVE, POINT, 8)
    assert min_rank_of_pencil(p8.phi1, p8.phi2) == 2
    p10 = build_pencil(CURVE, POINT, 10)
    assert p10.nu == 4
    assert min_rank_of_pencil(p10.phi1, p10.phi2) == 3


def test_quadratic_value_is_the_symmetric_form():
    phi = [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(-1)]]
    assert quadratic_value(phi, (1, 0)) == 1
    assert quadratic_value(phi, (0, 1)) == -1
    assert quadratic_value(phi, (1, 1)) == 1 + 4 - 1


def diag(*entries):
    dim = len(entries)
    return [[Fraction(entries[i]) if i == j else Fraction(0) for j in range(dim)]
            for i in range(dim)]


def test_min_rank_engineered_pencils():
    # diag(s, s+t, t) drops to rank two at three parameter points
    assert min_rank_of_pencil(diag(1, 1, 0), diag(0, 1, 1)) == 2
    # diag(s+t, s, 0): a member of rank one at s = 0
    assert min_rank_of_pencil(diag(1, 1, 0), diag(1, 0, 0)) == 1
    # generically full rank but singular members exist
    assert min_rank_of_pencil(diag(1, 2, 3), diag(1, 1, 1)) == 2
    # det is a binary form of the dimension's degree, so it always has a
    # complex root and some member must be singular
    assert min_rank_of_pencil(diag(1, 1), diag(1, -1)) == 1
    assert min_rank_of_pencil(diag(0, 0), diag(0, 0)) == 0


def sympy_min_rank(a, b):
    """Independent oracle: minimum rank of the pencil via symbolic minors.

    On each affine chart, rank can drop below k exactly when every k x k
    minor shares a root; the gcd of the minors detects that.
    """
    t = sympy.Symbol("t")
    dim = len(a)
    best = 0
    for first, second in ((a, b), (b, a)):
        m = sympy.Matrix([
            [sympy.Rational(first[i][j]) + t * sympy.Rational(second[i][j])
             for j in range(dim)] for i in range(dim)
        ])
        chart_min = 0
        for k in range(dim, 0, -1):
            minors = [m[rows, cols].det()
                      for rows in sympy.utilities.iterables.subsets(range(dim), k)
                      for cols in sympy.utilities.iterables.subsets(range(dim), k)]
            g = 0
            for minor in minors:
                g = sympy.gcd(g, sympy.Poly(minor, t))
                if sympy.Poly(g, t).degree() == 0 and g != 0:
                    break
            nonconstant = g == 0 or sympy.Poly(g, t).degree() > 0
            if not nonconstant:
                chart_min = k
                break
        best = max(best, 0)
        if best == 0 or chart_min < best:
            best = chart_min if best == 0 else min(best, chart_min)
    return best


def test_min_rank_matches_symbolic_oracle():
    rng = random.Random(5)
    for _ in range(30):
        dim = rng.randrange(2, 5)
        def rnd():
            m = [[Fraction(rng.randrange(-3, 4)) for _ in range(dim)] for _ in range(dim)]
            return [[m[i][j] + m[j][i] for j in range(dim)] for i in range(dim)]
        a, b = rnd(), rnd()
        assert min_rank_of_pencil(a, b) == sympy_min_rank(a, b)


def test_isotropic_candidates_lex_order():
    # x^2 + y^2 - z^2 paired with itself: Pythagorean triples
    phi = diag(1, 1, -1)
    gen = isotropic_candidates(phi, phi, 5)
    assert next(gen) == (-4, -3, -5)
    rest = list(gen)
    for vec in rest:
        assert quadratic_value(phi, vec) == 0
    assert (3, 4, 5) in rest


def test_isotropic_search_definite_form_finds_nothing():
    assert isotropic_search(diag(1, 1, 1), diag(1, 2, 3), 8) is None


def test_isotropic_search_respects_exclusions():
    phi = diag(1, 1, -1)
    # excluding z = 0 changes nothing; excluding x + z = 0 skips (-4,-3,-5)?
    # no: -4 + -5 = -9 != 0, so it stays first
    assert isotropic_search(phi, phi, 5) == (-4, -3, -5)
    assert isotropic_search(phi, phi, 5, [(0, 0, 1)]) == (-4, -3, -5)
    # kill each lex-early solution through a hyperplane that contains it
    first = isotropic_search(phi, phi, 5, [(1, 0, 0)])
    assert first is not None and first[0] != 0
    blocked = isotropic_search(phi, phi, 5, [(1, 1, 0), (0, 0, 1)])
    assert blocked is not None
    assert blocked[0] + blocked[1] != 0 and blocked[2] != 0


def test_isotropic_search_exclusion_can_exhaust():
    phi = diag(1, -1)
    # solutions are multiples of (1, 1) and (1, -1); excluding both lines
    assert isotropic_search(phi, phi, 6, [(1, -1), (1, 1)]) is None


def test_candidates_are_primitive():
    phi = diag(1, 1, -1)
    from math import gcd
    for vec in isotropic_candidates(phi, phi, 6):
        g = 0
        for c in vec:
            g = gcd(g, abs(c))
        assert g == 1
