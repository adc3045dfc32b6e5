"""The function field Q(E) = Q(x)[y] / (y^2 - x^3 - a x - b).

Elements with poles only at infinity are u(x) + v(x) y with polynomial u, v.
The module provides the pole filtration L(n O) with its monomial basis, the
invariant derivative normalized by D(x) = 2y, divisor extraction, the
symmetrization map to projective space, and its fibers.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import mpmath

from .precision import DEFAULT_BITS
from .qpoly import QPoly, resultant_in_parameter
from .scalars import QuadExt, squarefree_kernel


class FFElement:
    """u(x) + v(x) * y on a fixed curve."""

    __slots__ = ("curve", "u", "v")

    def __init__(self, curve, u, v=None):
        self.curve = curve
        self.u = self._as_poly(u)
        self.v = QPoly() if v is None else self._as_poly(v)

    @staticmethod
    def _as_poly(value):
        if isinstance(value, QPoly):
            return value
        if isinstance(value, (list, tuple)):
            return QPoly(value)
        return QPoly.const(value)

    @classmethod
    def x(cls, curve):
        return cls(curve, QPoly([0, 1]))

    @classmethod
    def y(cls, curve):
        return cls(curve, QPoly(), QPoly.const(1))

    @classmethod
    def one(cls, curve):
        return cls(curve, QPoly.const(1))

    @property
    def is_zero(self):
        return self.u.is_zero and self.v.is_zero

    def __eq__(self, other):
        if not isinstance(other, FFElement):
            return NotImplemented
        return self.curve == other.curve and self.u == other.u and self.v == other.v

    def __hash__(self):
        return hash((self.curve, self.u, self.v))

    def pole_order(self):
        """Pole order at the infinite place: max(2 deg u, 2 deg v + 3)."""
        if self.is_zero:
            raise ValueError("the zero function has no pole order")
        orders = []
        if not self.u.is_zero:
            orders.append(2 * self.u.degree)
        if not self.v.is_zero:
            orders.append(2 * self.v.degree + 3)
        return max(orders)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return FFElement(self.curve, self.u + other.u, self.v + other.v)

    __radd__ = __add__

    def __neg__(self):
        return FFElement(self.curve, -self.u, -self.v)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return FFElement(self.curve, self.u - other.u, self.v - other.v)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QPoly)):
            return FFElement(self.curve, self.u * other, self.v * other)
        if not isinstance(other, FFElement) or other.curve != self.curve:
            return NotImplemented
        w = self.curve.rhs_poly()
        u = self.u * other.u + self.v * other.v * w
        v = self.u * other.v + self.v * other.u
        return FFElement(self.curve, u, v)

    __rmul__ = __mul__

    def _coerce(self, other):
        if isinstance(other, FFElement):
            return other if other.curve == self.curve else None
        if isinstance(other, (int, Fraction)):
            return FFElement(self.curve, QPoly.const(other))
        if isinstance(other, QPoly):
            return FFElement(self.curve, other)
        return None

    def conjugate_y(self):
        """The hyperelliptic involution image u - v y."""
        return FFElement(self.curve, self.u, -self.v)

    def norm_poly(self):
        """Norm to Q(x): u^2 - v^2 (x^3 + a x + b)."""
        return self.u * self.u - self.v * self.v * self.curve.rhs_poly()

    def derivative(self):
        """Invariant derivative with D(x) = 2y, D(y) = 3x^2 + a."""
        w = self.curve.rhs_poly()
        wp = w.derivative()
        u = 2 * self.v.derivative() * w + wp * self.v
        v = 2 * self.u.derivative()
        return FFElement(self.curve, u, v)

    def evaluate(self, point):
        if point.is_infinity:
            raise ValueError("evaluation at the infinite place is a pole")
        return self.u(point.x) + self.v(point.x) * point.y

    def eval_mp(self, x, y):
        return self.u.eval_mp(x) + self.v.eval_mp(x) * y

    def __repr__(self):
        return f"FFElement(u={self.u!r}, v={self.v!r})"


def ff_derivative(f):
    return f.derivative()


def pole_order_at_infinity(f):
    return f.pole_order()


def basis_pole_orders(n):
    """Pole orders of the monomial basis of L(n O): 0, 2, 3, ..., n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return [0] + list(range(2, n + 1))


def rr_basis(curve, n):
    """Monomial basis 1, x, y, x^2, x y, ... of L(n O); length n."""
    basis = []
    for order in basis_pole_orders(n):
        if order % 2 == 0:
            basis.append(FFElement(curve, QPoly.x_power(order // 2)))
        else:
            basis.append(FFElement(curve, QPoly(), QPoly.x_power((order - 3) // 2)))
    return basis


def coordinates_in_basis(f, n):
    """Coefficient vector of f in rr_basis(E, n); errors if f is outside L(n O)."""
    if not f.is_zero and f.pole_order() > n:
        raise ValueError(f"pole order {f.pole_order()} exceeds {n}")
    vec = []
    for order in basis_pole_orders(n):
        if order % 2 == 0:
            vec.append(f.u[order // 2])
        else:
            vec.append(f.v[(order - 3) // 2])
    return vec


def element_from_coordinates(curve, vec, n):
    orders = basis_pole_orders(n)
    if len(vec) != len(orders):
        raise ValueError(f"expected {len(orders)} coordinates, got {len(vec)}")
    u = {}
    v = {}
    for c, order in zip(vec, orders):
        if order % 2 == 0:
            u[order // 2] = Fraction(c)
        else:
            v[(order - 3) // 2] = Fraction(c)
    mu = [u.get(i, Fraction(0)) for i in range(max(u) + 1)] if u else []
    mv = [v.get(i, Fraction(0)) for i in range(max(v) + 1)] if v else []
    return FFElement(curve, QPoly(mu), QPoly(mv))


# --- divisors ---


def _to_mpc(value):
    if isinstance(value, QuadExt):
        return value.to_mpc()
    value = Fraction(value)
    return mpmath.mpc(value.numerator) / value.denominator


@dataclass
class DivisorZero:
    """One zero of a function: exact or certified-numeric coordinates."""

    x: object
    y: object
    multiplicity: int
    exact: bool
    error: object = None

    def approx(self):
        if self.exact:
            return _to_mpc(self.x), _to_mpc(self.y)
        return mpmath.mpc(self.x), mpmath.mpc(self.y)


@dataclass
class Divisor:
    """Zeros with multiplicities plus the pole -n(O) of a function in L(n O)."""

    zeros: list
    pole_order: int

    def total_zero_multiplicity(self):
        return sum(z.multiplicity for z in self.zeros)


def _sqrt_exact(value):
    """Exact square root of a rational: a Fraction when the value is a
    square, otherwise r*sqrt(d) with d its squarefree kernel."""
    value = Fraction(value)
    if value == 0:
        return Fraction(0)
    d = squarefree_kernel(value)
    ratio = value / d
    root = Fraction(isqrt(ratio.numerator), isqrt(ratio.denominator))
    if d == 1:
        return root
    return QuadExt(d, 0, root)


def _poly_zero_points(curve, poly, mult, precision, out):
    """Zeros of a plain polynomial factor seen on the curve: symmetric pairs,
    with 2-torsion roots collapsing to one point of doubled multiplicity."""
    w = curve.rhs_poly()
    for factor, k in poly.squarefree_decomposition():
        total = mult * k
        torsion_part = factor.gcd(w)
        regular = factor.exact_div(torsion_part) if torsion_part.degree > 0 else factor
        for part, is_torsion in ((torsion_part, True), (regular, False)):
            if part.degree < 1:
                continue
            rational = part.rational_roots()
            remaining = part
            for root in sorted(rational):
                remaining = remaining.exact_div(QPoly([-root, 1]))
                if is_torsion:
                    out.append(DivisorZero(root, Fraction(0), 2 * total, True))
                else:
                    y0 = _sqrt_exact(w(root))
                    out.append(DivisorZero(root, y0, total, True))
                    out.append(DivisorZero(root, -y0, total, True))
            for x0, m, err in remaining.complex_roots(precision):
                y0 = mpmath.sqrt(w.eval_mp(x0))
                if is_torsion:
                    out.append(DivisorZero(x0, mpmath.mpc(0), 2 * total * m, False, err))
                else:
                    out.append(DivisorZero(x0, y0, total * m, False, err))
                    out.append(DivisorZero(x0, -y0, total * m, False, err))


def divisor_of(f, precision=DEFAULT_BITS):
    """Divisor of a nonzero f in L(n O): zeros with multiplicity, pole n at O.

    Rational data stays exact (including y in a quadratic extension over a
    rational x); the rest is certified numerics. The multiplicities always
    sum to the pole order; that identity is asserted.
    """
    if f.is_zero:
        raise ValueError("the zero function has no divisor")
    curve = f.curve
    w = curve.rhs_poly()
    zeros = []
    common = f.u.gcd(f.v) if not (f.u.is_zero or f.v.is_zero) else (
        f.u.monic() if f.v.is_zero else f.v.monic()
    )
    if common.degree > 0:
        _poly_zero_points(curve, common, 1, precision, zeros)
        u1 = f.u.exact_div(common) if not f.u.is_zero else QPoly()
        v1 = f.v.exact_div(common) if not f.v.is_zero else QPoly()
    else:
        u1, v1 = f.u, f.v
    if v1.is_zero:
        pass  # residual is a constant
    elif u1.is_zero:
        # residual c * y: zeros at the three two-torsion points
        _two_torsion_zeros(curve, w, precision, zeros)
    else:
        norm = (u1 * u1 - v1 * v1 * w).monic()
        rational = norm.rational_roots()
        remaining = norm
        for root, m in sorted(rational.items()):
            for _ in range(m):
                remaining = remaining.exact_div(QPoly([-root, 1]))
            y0 = -u1(root) / v1(root)
            zeros.append(DivisorZero(root, y0, m, True))
        for x0, m, err in remaining.complex_roots(precision):
            y0 = -u1.eval_mp(x0) / v1.eval_mp(x0)
            zeros.append(DivisorZero(x0, y0, m, False, err))
    zeros = _merge_exact(zeros)
    div = Divisor(zeros, f.pole_order())
    if div.total_zero_multiplicity() != div.pole_order:
        raise AssertionError(
            f"zero degree {div.total_zero_multiplicity()} != pole order {div.pole_order}"
        )
    return div


def _two_torsion_zeros(curve, w, precision, out):
    rational = w.rational_roots()
    remaining = w
    for root, m in sorted(rational.items()):
        for _ in range(m):
            remaining = remaining.exact_div(QPoly([-root, 1]))
        out.append(DivisorZero(root, Fraction(0), m, True))
    if remaining.degree > 0:
        for x0, m, err in remaining.complex_roots(precision):
            out.append(DivisorZero(x0, mpmath.mpc(0), m, False, err))


def _merge_exact(zeros):
    merged = {}
    numeric = []
    for z in zeros:
        if z.exact:
            key = (z.x, z.y)
            if key in merged:
                merged[key].multiplicity += z.multiplicity
            else:
                merged[key] = z
        else:
            numeric.append(z)
    return list(merged.values()) + numeric


# --- building functions from divisors ---


def _line_through(p, q):
    """Chord or tangent as an FFElement, never vertical."""
    curve = p.curve
    if p.x == q.x:
        slope = (3 * p.x * p.x + curve.a) / (2 * p.y)
    else:
        slope = (q.y - p.y) / (q.x - p.x)
    intercept = p.y - slope * p.x
    return FFElement(curve, QPoly([-intercept, -slope]), QPoly.const(1))


def function_with_divisor(curve, points):
    """Function with divisor sum(P_i) - n(O) for points summing to O.

    Chord accumulation: pairs are replaced by their sum, multiplying by the
    chord and dividing by the vertical line of the sum. The result is exact
    and unique up to a nonzero scalar.
    """
    pts = [p for p in points if not p.is_infinity]
    n = len(points)
    if n < 2:
        raise ValueError("need at least two points")
    total = curve.infinity()
    for p in pts:
        if p.curve != curve:
            raise ValueError("points must live on the given curve")
        total = total + p
    if not total.is_infinity:
        raise ValueError(f"points sum to {total}, not O")
    num = FFElement.one(curve)
    den = QPoly.const(1)
    work = list(pts)
    while len(work) >= 2:
        p = work.pop()
        q = work.pop()
        if p == -q:
            num = num * FFElement(curve, QPoly([-p.x, 1]))
            continue
        s = p + q
        num = num * _line_through(p, q)
        den = den * QPoly([-s.x, 1])
        work.append(s)
    if work:
        raise AssertionError("accumulation left a non-cancelling point")
    u = num.u.exact_div(den)
    v = num.v.exact_div(den)
    f = FFElement(curve, u, v)
    if f.pole_order() > n:
        raise AssertionError("accumulated function exceeds the expected pole order")
    return f


# --- symmetrization ---


@dataclass(frozen=True)
class SymPoint:
    """Projective image of an unordered point tuple, first nonzero coordinate 1."""

    n: int
    coords: tuple

    def __post_init__(self):
        vec = [Fraction(c) for c in self.coords]
        lead = next((c for c in vec if c != 0), None)
        if lead is None:
            raise ValueError("projective point needs a nonzero coordinate")
        object.__setattr__(self, "coords", tuple(c / lead for c in vec))


def symmetrize(curve, points):
    """Image of a multiset of n points summing to O in P^(n-1).

    Coordinates are those of the interpolating function in the monomial basis
    of L(n O); invariance under permutations of the input is automatic because
    the function is unique up to scalar.
    """
    f = function_with_divisor(curve, points)
    return SymPoint(len(points), tuple(coordinates_in_basis(f, len(points))))


def fiber_roots(curve, sym, lam=Fraction(0), precision=DEFAULT_BITS):
    """Zeros of f - lam for the function behind a SymPoint (or an FFElement).

    Returns the divisor of f - lam; for lam = 0 on a symmetrized tuple this
    recovers the input multiset.
    """
    f = sym if isinstance(sym, FFElement) else element_from_coordinates(curve, sym.coords, sym.n)
    shifted = FFElement(curve, f.u - Fraction(lam), f.v)
    return divisor_of(shifted, precision)


# --- critical values, exactly ---


def critical_value_polynomial(f):
    """W(lambda) = prod over zeros Q of D(f) of (lambda - f(Q))^ord_Q(D f).

    Assembled from monic resultants only, so it is exact. deg W = n + 1 and
    the multiplicity of a root lambda_c is the contact parity sum
    sum (m_i - 1) over the fiber of lambda_c; the pole adds n - 1 on top.
    """
    curve = f.curve
    w = curve.rhs_poly()
    fp = f.derivative()
    if fp.is_zero:
        raise ValueError("constant function has no critical values")
    result = QPoly.const(1)

    if fp.v.is_zero:
        common, u1, v1 = fp.u.monic(), QPoly.const(fp.u.lc), QPoly()
    elif fp.u.is_zero:
        common, u1, v1 = fp.v.monic(), QPoly(), QPoly.const(1)
    else:
        common = fp.u.gcd(fp.v)
        u1 = fp.u.exact_div(common)
        v1 = fp.v.exact_div(common)

    # paired zeros from the common polynomial part
    if common.degree > 0:
        for s, k in common.squarefree_decomposition():
            tor = s.gcd(w)
            reg = s.exact_div(tor) if tor.degree > 0 else s
            if tor.degree > 0:
                part = resultant_in_parameter(
                    lambda lam, tor=tor: tor.resultant(QPoly.const(lam) - f.u), tor.degree
                )
                result = result * part ** (2 * k)
            if reg.degree > 0:
                def value(lam, reg=reg):
                    shifted = (QPoly.const(lam) - f.u) ** 2 - f.v * f.v * w
                    return reg.resultant(shifted)

                part = resultant_in_parameter(value, 2 * reg.degree)
                result = result * part**k

    # residual zeros
    if not v1.is_zero and not u1.is_zero:
        norm = (u1 * u1 - v1 * v1 * w).monic()
        s_poly = f.u * v1 - f.v * u1
        for t_factor, m in norm.squarefree_decomposition():
            def value(lam, t_factor=t_factor):
                return t_factor.resultant(v1 * lam - s_poly)

            part = resultant_in_parameter(value, t_factor.degree)
            result = result * part**m
    elif not v1.is_zero:
        # residual c*y: zeros at the two-torsion points, f-value u at each
        part = resultant_in_parameter(lambda lam: w.resultant(QPoly.const(lam) - f.u), 3)
        result = result * part

    n = f.pole_order()
    if result.degree != n + 1:
        raise AssertionError(
            f"critical value polynomial has degree {result.degree}, expected {n + 1}"
        )
    return result


def genus_of_preimage(f):
    """Genus of the preimage curve of the line through f, with branch data.

    The preimage is the double cover branched at the odd-contact branch
    points of f; genus = B/2 - 1 with B their count (pole included, parity
    n - 1). Returns (genus, branch profile) where the profile lists
    (factor polynomial or 'infinity', contact multiplicity).
    """
    n = f.pole_order()
    bigw = critical_value_polynomial(f)
    profile = []
    odd_points = 0
    for factor, mult in bigw.squarefree_decomposition():
        profile.append((factor, mult))
        if mult % 2 == 1:
            odd_points += factor.degree
    profile.append(("infinity", n - 1))
    if (n - 1) % 2 == 1:
        odd_points += 1
    if odd_points % 2 != 0:
        raise AssertionError("branch point count must be even")
    genus = odd_points // 2 - 1
    return genus, profile
