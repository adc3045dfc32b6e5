"""Pencils of quadratic forms from the exactness constraints on a curve.

For even n, candidate functions h range over L(nu O) with nu = n/2 - 1. The
product of the tangent line at a base point with h^2 lies in L((n+1) O), and
it is an exact derivative precisely when two linear functionals vanish on it.
Those functionals turn into a pencil of quadratic forms in the coefficients
of h; a common isotropic vector yields a function f with D(f) = l h^2 whose
shifted divisor has one double zero and otherwise odd zeros.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import gcd, isqrt

from .funcfield import (
    FFElement,
    coordinates_in_basis,
    divisor_of,
    element_from_coordinates,
    genus_of_preimage,
    rr_basis,
)
from .linalg import nullspace, solve
from .qpoly import QPoly


def derivation_matrix(curve, n):
    """Matrix of D: L(n O) -> L((n+1) O) in the monomial bases, (n+1) x n."""
    columns = []
    for b in rr_basis(curve, n):
        columns.append(coordinates_in_basis(b.derivative(), n + 1))
    return [[columns[j][i] for j in range(n)] for i in range(n + 1)]


def exactness_functionals(curve, n):
    """Two independent functionals on L((n+1) O) vanishing on exact derivatives.

    They span the left null space of the derivation matrix, which has rank
    n - 1 because only constants are killed by D.
    """
    matrix = derivation_matrix(curve, n)
    transpose = [[matrix[i][j] for i in range(n + 1)] for j in range(n)]
    basis = nullspace(transpose)
    if len(basis) != 2:
        raise AssertionError(f"left null space has dimension {len(basis)}, expected 2")
    normalized = []
    for vec in basis:
        lead = next(c for c in vec if c != 0)
        normalized.append(tuple(c / lead for c in vec))
    return tuple(normalized)


def tangent_line(curve, point):
    """y - (slope x + intercept) with divisor 2(P) + (-2P) - 3(O)."""
    if point.is_infinity or point.y == 0:
        raise ValueError("tangent construction needs a point with 2P != O")
    slope = (3 * point.x * point.x + curve.a) / (2 * point.y)
    intercept = point.y - slope * point.x
    return FFElement(curve, QPoly([-intercept, -slope]), QPoly.const(1))


@dataclass
class Pencil:
    curve: object
    point: object
    n: int
    nu: int
    tangent: FFElement
    functionals: tuple
    phi1: list
    phi2: list


def build_pencil(curve, point, n):
    """The two quadratic forms in the nu = n/2 - 1 coefficients of h."""
    if n % 2 or n < 6:
        raise ValueError("n must be even and at least 6")
    nu = n // 2 - 1
    line = tangent_line(curve, point)
    lam1, lam2 = exactness_functionals(curve, n)
    basis = rr_basis(curve, nu)
    phi1 = [[Fraction(0)] * nu for _ in range(nu)]
    phi2 = [[Fraction(0)] * nu for _ in range(nu)]
    for j in range(nu):
        for k in range(j, nu):
            coords = coordinates_in_basis(line * basis[j] * basis[k], n + 1)
            v1 = sum(a * b for a, b in zip(lam1, coords))
            v2 = sum(a * b for a, b in zip(lam2, coords))
            phi1[j][k] = phi1[k][j] = v1
            phi2[j][k] = phi2[k][j] = v2
    return Pencil(curve, point, n, nu, line, (lam1, lam2), phi1, phi2)


def quadratic_value(form, vec):
    dim = len(form)
    total = Fraction(0)
    for i in range(dim):
        for j in range(dim):
            if vec[i] and vec[j]:
                total += form[i][j] * vec[i] * vec[j]
    return total


# --- minimal rank across the pencil ---


def _poly_det(matrix):
    size = len(matrix)
    if size == 1:
        return matrix[0][0]
    total = QPoly()
    for i in range(size):
        entry = matrix[i][0]
        if entry.is_zero:
            continue
        minor = [row[1:] for k, row in enumerate(matrix) if k != i]
        term = entry * _poly_det(minor)
        total = total + term if i % 2 == 0 else total - term
    return total


def _minor_gcd_constant(first, second, k):
    """Whether the gcd of all k x k minors of first + t*second is a nonzero constant."""
    dim = len(first)
    matrix = [[QPoly([first[i][j], second[i][j]]) for j in range(dim)] for i in range(dim)]
    acc = QPoly()
    for rows in combinations(range(dim), k):
        for cols in combinations(range(dim), k):
            minor = _poly_det([[matrix[i][j] for j in cols] for i in rows])
            acc = acc.gcd(minor)
            if acc.degree == 0:
                return True
    return False


def min_rank_of_pencil(phi1, phi2):
    """Smallest rank among all members s*phi1 + t*phi2, (s:t) over the complexes.

    The rank stays >= k across every member exactly when the k x k minors
    have no common zero on either affine chart of the parameter line.
    """
    dim = len(phi1)
    for k in range(dim, 0, -1):
        if _minor_gcd_constant(phi1, phi2, k) and _minor_gcd_constant(phi2, phi1, k):
            return k
    return 0


# --- isotropic vectors ---


def _clear_quadratic(a, b, c):
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    denom = a.denominator
    for f in (b, c):
        denom = denom * f.denominator // gcd(denom, f.denominator)
    return int(a * denom), int(b * denom), int(c * denom)


def _integer_roots(a, b, c, bound):
    """Integer solutions of a z^2 + b z + c = 0 within [-bound, bound], sorted.

    A None return means the equation is identically zero and every z works.
    """
    a, b, c = _clear_quadratic(a, b, c)
    if a == 0:
        if b == 0:
            return None if c == 0 else []
        if c % b:
            return []
        z = -c // b
        return [z] if abs(z) <= bound else []
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    root = isqrt(disc)
    if root * root != disc:
        return []
    out = []
    for s in (-root, root):
        num = -b + s
        if num % (2 * a) == 0:
            z = num // (2 * a)
            if abs(z) <= bound:
                out.append(z)
    return sorted(set(out))


def isotropic_candidates(phi1, phi2, bound):
    """Primitive integer common zeros of both forms in the box, in lex order.

    The first nu - 1 coordinates are enumerated lexicographically from -bound
    upward and the last coordinate is solved exactly, so the scan is complete
    and the first yield is the lex-minimal solution.
    """
    dim = len(phi1)
    last = dim - 1
    for prefix in product(range(-bound, bound + 1), repeat=last):
        a = phi1[last][last]
        b = 2 * sum(phi1[i][last] * prefix[i] for i in range(last))
        c = sum(phi1[i][j] * prefix[i] * prefix[j] for i in range(last) for j in range(last))
        roots = _integer_roots(a, b, c, bound)
        if roots is None:
            roots = range(-bound, bound + 1)
        for z in roots:
            vec = prefix + (z,)
            if not any(vec):
                continue
            g = 0
            for comp in vec:
                g = gcd(g, abs(comp))
            if g != 1:
                continue
            if quadratic_value(phi2, vec) != 0:
                continue
            yield vec


def isotropic_search(phi1, phi2, bound, excluded_hyperplanes=()):
    """Lex-first common isotropic vector off the given hyperplanes, or None.

    Each excluded hyperplane is a coefficient vector of a linear form; a hit
    must satisfy L(v) != 0 for every one of them.  The bound makes the scan
    explicitly incomplete: None means no solution in the box, not that no
    solution exists.
    """
    for vec in isotropic_candidates(phi1, phi2, bound):
        if any(sum(l * x for l, x in zip(form, vec)) == 0
               for form in excluded_hyperplanes):
            continue
        # the enumeration already guarantees all of this, but a hit is
        # accepted only on its own evidence
        assert quadratic_value(phi1, vec) == 0
        assert quadratic_value(phi2, vec) == 0
        assert all(sum(l * x for l, x in zip(form, vec)) != 0
                   for form in excluded_hyperplanes)
        return vec
    return None


# --- verification of a constructed function ---


@dataclass
class ConstructionReport:
    h: FFElement
    f: FFElement
    base_value: Fraction
    functional_values: tuple
    tangent_point_value: Fraction
    double_zero_ok: bool
    odd_zeros_ok: bool
    genus: int
    branch_profile: list
    ok: bool


def verify_construction(pencil, h_vec, precision=None):
    """Check every claim behind an isotropic vector, exactly.

    Solves D(f) = l h^2 as an exact linear system, confirms h does not vanish
    at -2P, extracts the divisor of f - f(-2P) (one double zero at -2P, odd
    multiplicities elsewhere), and recomputes the genus of the preimage,
    which must be 0.
    """
    curve, point, n = pencil.curve, pencil.point, pencil.n
    h = element_from_coordinates(curve, h_vec, pencil.nu)
    if h.is_zero:
        raise ValueError("h must be nonzero")
    lh2 = pencil.tangent * h * h
    rhs = coordinates_in_basis(lh2, n + 1)
    lam1, lam2 = pencil.functionals
    functional_values = (
        sum(a * b for a, b in zip(lam1, rhs)),
        sum(a * b for a, b in zip(lam2, rhs)),
    )
    matrix = derivation_matrix(curve, n)
    coords = solve(matrix, rhs)
    if coords is None:
        raise AssertionError("l h^2 is not an exact derivative despite the functionals")
    f = element_from_coordinates(curve, coords, n)
    if f.derivative() != lh2:
        raise AssertionError("solved function does not differentiate to l h^2")

    minus2 = -(2 * point)
    tangent_point_value = h.evaluate(minus2)
    base_value = f.evaluate(minus2)
    shifted = FFElement(curve, f.u - base_value, f.v)
    div = divisor_of(shifted) if precision is None else divisor_of(shifted, precision)
    double_zero_ok = False
    odd_zeros_ok = True
    for zero in div.zeros:
        at_base = zero.exact and zero.x == minus2.x and zero.y == minus2.y
        if at_base:
            double_zero_ok = zero.multiplicity == 2
        elif zero.multiplicity % 2 == 0:
            odd_zeros_ok = False
    genus, profile = genus_of_preimage(f)
    ok = (
        functional_values == (0, 0)
        and tangent_point_value != 0
        and double_zero_ok
        and odd_zeros_ok
        and genus == 0
    )
    return ConstructionReport(
        h=h,
        f=f,
        base_value=base_value,
        functional_values=functional_values,
        tangent_point_value=tangent_point_value,
        double_zero_ok=double_zero_ok,
        odd_zeros_ok=odd_zeros_ok,
        genus=genus,
        branch_profile=profile,
        ok=ok,
    )
