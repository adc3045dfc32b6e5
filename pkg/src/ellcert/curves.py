"""Short Weierstrass curves y^2 = x^3 + a x + b over Q and Q(sqrt(d)).

Group law, torsion detection, and canonical heights. The canonical height
follows the doubling limit h(P) = lim 4^-n h(x(2^n P)) with the absolute
Weil height of the x-coordinate. Exact doubling is hopeless at the needed
depth (coordinate sizes grow like 4^n), so the engine tracks the duplication
quartic in high precision floats for magnitudes and in modular residues for
the exact gcd that reduces each new fraction. The tail is cut off with an
explicit height-difference constant derived from Bezout identities of the
duplication pair, so the stated error bound is honest.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd as _igcd

import mpmath
import sympy

from .precision import DEFAULT_BITS, PrecisionError, working_bits
from .qpoly import QPoly
from .scalars import QuadExt, ensure_same_field

TORSION_BOUND_Q = 12  # largest torsion order over Q
TORSION_BOUND_QUADRATIC = 18  # largest torsion order over a quadratic field

DEFAULT_HEIGHT_ERROR = Fraction(1, 10**8)


@dataclass(frozen=True)
class WeierstrassCurve:
    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.discriminant() == 0:
            raise ValueError(f"singular curve: 4a^3 + 27b^2 = 0 for a={self.a}, b={self.b}")

    def discriminant(self):
        return -16 * (4 * self.a**3 + 27 * self.b**2)

    def j_invariant(self):
        # j = c4^3 / disc with c4 = -48a
        return Fraction(-110592) * self.a**3 / self.discriminant()

    def rhs_poly(self):
        """x^3 + a x + b as an exact polynomial."""
        return QPoly([self.b, self.a, 0, 1])

    def rhs(self, x):
        return x * x * x + self.a * x + self.b

    def contains(self, x, y):
        return y * y == self.rhs(x)

    def point(self, x, y):
        return CurvePoint(self, x, y)

    def infinity(self):
        return CurvePoint(self, None, None)

    def twist(self, d):
        """Quadratic twist by squarefree d, as a short Weierstrass curve."""
        d = int(d)
        return WeierstrassCurve(self.a * d * d, self.b * d**3)

    def integral_model(self):
        """(curve with integer coefficients, scale u) with x -> u^2 x."""
        need = {}
        for frac, k in ((self.a, 4), (self.b, 6)):
            for p, e in sympy.factorint(frac.denominator).items():
                p = int(p)
                need[p] = max(need.get(p, 0), -(-e // k))
        u = 1
        for p, e in need.items():
            u *= p**e
        return WeierstrassCurve(self.a * u**4, self.b * u**6), u

    def __repr__(self):
        return f"WeierstrassCurve(y^2 = x^3 + {self.a}*x + {self.b})"


class CurvePoint:
    """Affine point or the point at infinity. Coordinates are Fraction or QuadExt."""

    __slots__ = ("curve", "x", "y")

    def __init__(self, curve, x, y):
        self.curve = curve
        if x is None and y is None:
            self.x = self.y = None
            return
        x = _normalize_scalar(x)
        y = _normalize_scalar(y)
        ensure_same_field(x, y)
        if not curve.contains(x, y):
            raise ValueError(f"({x}, {y}) is not on {curve}")
        self.x, self.y = x, y

    @property
    def is_infinity(self):
        return self.x is None

    @property
    def field_d(self):
        """d of the quadratic field the coordinates live in, or None over Q."""
        for c in (self.x, self.y):
            if isinstance(c, QuadExt) and c.v != 0:
                return c.d
        return None

    @property
    def is_anti_fixed(self):
        """True when conjugation sends the point to its negative.

        That is the Galois shape produced by lifting: rational x, purely
        irrational y.
        """
        if self.is_infinity:
            return False
        x_rat = not (isinstance(self.x, QuadExt) and self.x.v != 0)
        return x_rat and isinstance(self.y, QuadExt) and self.y.v != 0 and self.y.u == 0

    def conjugate(self):
        if self.is_infinity:
            return self
        cx = self.x.conjugate() if isinstance(self.x, QuadExt) else self.x
        cy = self.y.conjugate() if isinstance(self.y, QuadExt) else self.y
        return CurvePoint(self.curve, cx, cy)

    def __eq__(self, other):
        if not isinstance(other, CurvePoint):
            return NotImplemented
        if self.curve != other.curve:
            return False
        if self.is_infinity or other.is_infinity:
            return self.is_infinity and other.is_infinity
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.curve, self.x, self.y))

    def __neg__(self):
        if self.is_infinity:
            return self
        return CurvePoint(self.curve, self.x, -self.y)

    def __add__(self, other):
        if not isinstance(other, CurvePoint) or self.curve != other.curve:
            return NotImplemented
        if self.is_infinity:
            return other
        if other.is_infinity:
            return self
        x1, y1, x2, y2 = self.x, self.y, other.x, other.y
        if x1 == x2:
            if y1 == -y2:
                return self.curve.infinity()
            slope = (3 * x1 * x1 + self.curve.a) / (2 * y1)
        else:
            slope = (y2 - y1) / (x2 - x1)
        x3 = slope * slope - x1 - x2
        y3 = slope * (x1 - x3) - y1
        p = CurvePoint.__new__(CurvePoint)
        p.curve, p.x, p.y = self.curve, x3, y3
        return p

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (-k) * (-self)
        acc = self.curve.infinity()
        base = self
        while k:
            if k & 1:
                acc = acc + base
            base = base + base
            k >>= 1
        return acc

    def __repr__(self):
        if self.is_infinity:
            return "O"
        return f"({self.x}, {self.y})"


def _normalize_scalar(c):
    if isinstance(c, QuadExt):
        return c.u if c.v == 0 else c
    return Fraction(c)


def add_points(p, q):
    return p + q


def scalar_multiple(k, p):
    return k * p


def torsion_order(point, bound=None):
    """Order of the point if torsion within the bound, else None.

    Default bounds are the uniform ones: 12 over Q, 18 over quadratic fields.
    """
    if point.is_infinity:
        return 1
    if bound is None:
        bound = TORSION_BOUND_Q if point.field_d is None else TORSION_BOUND_QUADRATIC
    acc = point
    for n in range(1, bound + 1):
        if acc.is_infinity:
            return n
        acc = acc + point
    return None


# --- canonical height engine ---


def _form_mul(f, g):
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return out


def _clear_poly(p):
    ints, _ = p.int_coeffs()
    # int_coeffs strips content; here the exact scaled polynomial is needed
    den = 1
    for c in p.coeffs:
        den = den * c.denominator // _igcd(den, c.denominator)
    return QPoly([c * den for c in p.coeffs]), den


class _HeightEngine:
    """Duplication data for one curve with integer coefficients."""

    def __init__(self, curve):
        a, b = int(curve.a), int(curve.b)
        self.curve = curve
        self.a, self.b = a, b
        # x(2P) = F(p, q) / G(p, q) for x = p/q in lowest terms
        self.F = [Fraction(c) for c in (a * a, -8 * b, -2 * a, 0, 1)]
        self.G = [Fraction(c) for c in (4 * b, 4 * a, 0, 4, 0)]
        phi = QPoly(self.F)
        psi = QPoly([4 * b, 4 * a, 0, 4])
        g, s, t = phi.xgcd(psi)
        if g.degree != 0:
            raise ValueError("duplication polynomials share a factor; curve is singular")
        s, t = s * (1 / g.lc), t * (1 / g.lc)
        U, lq_u = _clear_poly(s)
        V, lq_v = _clear_poly(t)
        scale = lq_u * lq_v // _igcd(lq_u, lq_v)
        U = U * Fraction(scale, lq_u)
        V = V * Fraction(scale, lq_v)
        self.Lq = scale
        self.Aq = self._homog(U, 3)
        self.Bq = self._homog(V, 3)
        self._check_identity(self.Aq, self.Bq, 0, self.Lq)

        alpha = QPoly(list(reversed(self.F)))
        beta = QPoly(list(reversed(self.G)))
        g2, s2, t2 = alpha.xgcd(beta)
        if g2.degree != 0:
            raise ValueError("reversed duplication pair shares a factor")
        s2, t2 = s2 * (1 / g2.lc), t2 * (1 / g2.lc)
        U2, lp_u = _clear_poly(s2)
        V2, lp_v = _clear_poly(t2)
        scale2 = lp_u * lp_v // _igcd(lp_u, lp_v)
        U2 = U2 * Fraction(scale2, lp_u)
        V2 = V2 * Fraction(scale2, lp_v)
        self.Lp = scale2
        self.Ap = self._homog_rev(U2, 3)
        self.Bp = self._homog_rev(V2, 3)
        self._check_identity(self.Ap, self.Bp, 7, self.Lp)

        self.R = abs(self.Lp * self.Lq)
        s_up = max(sum(abs(c) for c in self.F), sum(abs(c) for c in self.G))
        s_bez = max(
            sum(abs(c) for c in form) for form in (self.Aq, self.Bq, self.Ap, self.Bp)
        )
        lower = Fraction(2 * s_bez * self.R, min(abs(self.Lp), abs(self.Lq)))
        self.tail_constant = float(mpmath.log(max(int(s_up), int(lower)) + 1))

    @staticmethod
    def _homog(poly, deg):
        if poly.degree > deg:
            raise ValueError("degree too large to homogenize")
        return [poly[i] for i in range(deg + 1)]

    @staticmethod
    def _homog_rev(poly, deg):
        if poly.degree > deg:
            raise ValueError("degree too large to homogenize")
        return [poly[deg - i] for i in range(deg + 1)]

    def _check_identity(self, A, B, p_power, const):
        lhs = [
            x + y for x, y in zip(_form_mul(A, self.F), _form_mul(B, self.G))
        ]
        expect = [Fraction(0)] * 8
        expect[p_power] = Fraction(const)
        if lhs != expect:
            raise AssertionError("Bezout identity for the duplication pair failed")

    def steps_for(self, target_error):
        # tail after n steps is at most 4^-n * C / 3; keep half the budget for rounding
        n = 2
        while 4.0 ** (-n) * self.tail_constant / 3 > float(target_error) / 2:
            n += 1
        return n

    def run(self, x0, target_error):
        p0, q0 = x0.numerator, x0.denominator
        steps = self.steps_for(target_error)
        prec = max(192, min(4096, max(p0.bit_length(), q0.bit_length()) + 64))
        for _ in range(4):
            try:
                return self._run_at(p0, q0, steps, prec)
            except _Cancellation:
                prec *= 2
        raise PrecisionError(
            f"canonical height iteration lost precision for x = {x0} at {prec // 2} bits"
        )

    def _run_at(self, p0, q0, steps, prec):
        f0, f1, f2, f3, f4 = [int(c) for c in self.F]
        g0, g1, g3 = int(self.G[0]), int(self.G[1]), int(self.G[3])
        coeff_span = 1 + max(
            abs(f0) + abs(f1) + abs(f2) + abs(f4), abs(g0) + abs(g1) + abs(g3)
        )
        use_mod = self.R > 1
        if use_mod:
            modulus = self.R ** (steps + 2)
            pm, qm = p0 % modulus, q0 % modulus
        with working_bits(prec):
            guard = mpmath.mpf(2) ** (-(prec // 2))
            pf = mpmath.mpf(p0)
            qf = mpmath.mpf(q0)
            for _ in range(steps):
                p2 = pf * pf
                q2 = qf * qf
                numer = f4 * p2 * p2 + f2 * p2 * q2 + qf * q2 * (f1 * pf + f0 * qf)
                denom = qf * (g3 * p2 * pf + q2 * (g1 * pf + g0 * qf))
                scale = coeff_span * max(p2, q2) ** 2
                if abs(numer) < scale * guard or abs(denom) < scale * guard:
                    raise _Cancellation
                if use_mod:
                    amod = (
                        f4 * pow(pm, 4, modulus)
                        + f2 * pow(pm, 2, modulus) * pow(qm, 2, modulus)
                        + f1 * pm * pow(qm, 3, modulus)
                        + f0 * pow(qm, 4, modulus)
                    ) % modulus
                    bmod = (
                        qm
                        * (g3 * pow(pm, 3, modulus) + g1 * pm * pow(qm, 2, modulus) + g0 * pow(qm, 3, modulus))
                    ) % modulus
                    g = _igcd(_igcd(amod, bmod), self.R)
                    if g > 1:
                        modulus //= g
                        pm, qm = (amod // g) % modulus, (bmod // g) % modulus
                        pf = numer / g
                        qf = denom / g
                        continue
                    pm, qm = amod % modulus, bmod % modulus
                pf, qf = numer, denom
            h = mpmath.log(max(abs(pf), abs(qf)))
            return h / mpmath.mpf(4) ** steps


class _Cancellation(Exception):
    pass


_ENGINES = {}


def _engine_for(curve):
    key = (curve.a, curve.b)
    if key not in _ENGINES:
        _ENGINES[key] = _HeightEngine(curve)
    return _ENGINES[key]


def canonical_height(point, target_error=DEFAULT_HEIGHT_ERROR, torsion_bound=None):
    """Canonical height via the doubling limit, with error below target_error.

    Torsion points (detected exactly first) return 0. Non-torsion points over
    Q(sqrt(d)) with irrational x are split along the conjugation eigenspaces:
    h(P) = (h(P + conj P) + h(P - conj P)) / 4, both summands having rational
    x; this is the parallelogram law plus Galois invariance.
    """
    if point.is_infinity or torsion_order(point, bound=torsion_bound) is not None:
        return mpmath.mpf(0)
    target_error = Fraction(target_error)
    x = point.x
    if isinstance(x, QuadExt) and x.v != 0:
        plus = point + point.conjugate()
        minus = point - point.conjugate()
        half = target_error / 2
        ha = canonical_height(plus, half, torsion_bound)
        hb = canonical_height(minus, half, torsion_bound)
        return (ha + hb) / 4
    x = x.u if isinstance(x, QuadExt) else x
    integral, u = point.curve.integral_model()
    engine = _engine_for(integral)
    return engine.run(Fraction(x) * u * u, target_error)


def height_pairing(p, q, target_error=DEFAULT_HEIGHT_ERROR):
    """Bilinear height pairing (h(P+Q) - h(P) - h(Q)) / 2.

    Points fixed-minus by conjugations of different quadratic fields (or one
    of them rational) are exactly orthogonal: applying the conjugation that
    negates one point and fixes the other flips the sign of the pairing.
    """
    if p.curve != q.curve:
        raise ValueError("pairing needs points on one curve")
    dp, dq = p.field_d, q.field_d
    if dp == dq or dp is None or dq is None:
        if dp != dq:
            anti = p if dp is not None else q
            if anti.is_anti_fixed:
                return mpmath.mpf(0)
            raise ValueError("mixed-domain pairing needs the quadratic point anti-fixed")
        third = Fraction(target_error) / 3
        return (
            canonical_height(p + q, third)
            - canonical_height(p, third)
            - canonical_height(q, third)
        ) / 2
    if p.is_anti_fixed and q.is_anti_fixed:
        return mpmath.mpf(0)
    raise ValueError(
        f"no pairing between general points of Q(sqrt({dp})) and Q(sqrt({dq}))"
    )


def regulator(points, count=None, target_error=DEFAULT_HEIGHT_ERROR):
    """Gram determinant of the height pairing on the first `count` points."""
    if count is None:
        count = min(len(points), 6)
    pts = list(points)[:count]
    if not pts:
        return mpmath.mpf(1)
    gram = mpmath.matrix(len(pts))
    for i, a in enumerate(pts):
        for j, b in enumerate(pts):
            if j < i:
                gram[i, j] = gram[j, i]
            else:
                gram[i, j] = height_pairing(a, b, target_error)
    with working_bits(DEFAULT_BITS):
        return mpmath.det(gram)


def twist_image(point):
    """Rational point on the twist curve matching an anti-fixed quadratic point.

    (x, v sqrt(d)) on y^2 = x^3 + ax + b maps to (d x, d^2 v) on
    Y^2 = X^3 + a d^2 X + b d^3.
    """
    if not point.is_anti_fixed:
        raise ValueError("twist image needs an anti-fixed point")
    d = point.y.d
    twisted = point.curve.twist(d)
    x = point.x.u if isinstance(point.x, QuadExt) else point.x
    return CurvePoint(twisted, d * x, d * d * point.y.v)
