"""Dense univariate polynomials over Q.

Coefficients are Fractions stored in ascending order. This stays deliberately
small: arithmetic, exact division, gcd chains, Sturm counts, Yun squarefree
decomposition, resultants, rational roots, and certified numeric roots are
all the library needs.
"""

from fractions import Fraction
from math import gcd as _igcd
from math import lcm as _ilcm

import mpmath
import sympy

from .precision import DEFAULT_BITS, PrecisionError, extra_bits, working_bits


def _trim(coeffs):
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


class QPoly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        self.coeffs = tuple(_trim([Fraction(c) for c in coeffs]))

    @classmethod
    def const(cls, c):
        return cls([Fraction(c)])

    @classmethod
    def x_power(cls, k, scale=1):
        return cls([0] * k + [scale])

    @classmethod
    def from_roots(cls, roots):
        p = cls.const(1)
        for r in roots:
            p = p * cls([-Fraction(r), 1])
        return p

    # --- structure ---

    @property
    def degree(self):
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def lc(self):
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, k):
        return self.coeffs[k] if 0 <= k <= self.degree else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, QPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == QPoly.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if self.is_zero:
            return "QPoly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}*x^{i}" if i else f"{c}")
        return "QPoly(" + " + ".join(terms) + ")"

    # --- ring operations ---

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QPoly.const(other)
        if not isinstance(other, QPoly):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return QPoly([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return QPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QPoly.const(other)
        if not isinstance(other, QPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QPoly([c * other for c in self.coeffs])
        if not isinstance(other, QPoly):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return QPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return QPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        result, base = QPoly.const(1), self
        while k:
            if k & 1:
                result = result * base
            base, k = base * base, k >> 1
        return result

    def __divmod__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QPoly.const(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return QPoly(), self
        quo = [Fraction(0)] * (dq + 1)
        inv_lc = 1 / other.lc
        for k in range(dq, -1, -1):
            c = rem[k + other.degree] * inv_lc
            if c:
                quo[k] = c
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return QPoly(quo), QPoly(rem[: other.degree])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        quo, rem = divmod(self, other)
        if not rem.is_zero:
            raise ValueError(f"{other!r} does not divide {self!r}")
        return quo

    def derivative(self):
        return QPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def monic(self):
        if self.is_zero:
            return self
        return self * (1 / self.lc)

    def __call__(self, x):
        """Horner evaluation; works for Fraction, QuadExt, mpf/mpc inputs."""
        if self.is_zero:
            return 0 * x if not isinstance(x, (int, Fraction)) else Fraction(0)
        acc = self.coeffs[-1] if isinstance(x, (int, Fraction)) else self.coeffs[-1] + 0 * x
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def eval_mp(self, x):
        """Evaluation with coefficients converted to exact mpf/mpc first."""
        acc = mpmath.mpf(0)
        for c in reversed(self.coeffs):
            acc = acc * x + mpmath.mpf(c.numerator) / c.denominator
        return acc

    # --- gcd machinery ---

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero:
            a, b = b, a % b
        if a.is_zero:
            return a
        return a.monic()

    def xgcd(self, other):
        """Extended gcd: returns (g, s, t) monic g with s*self + t*other = g."""
        r0, r1 = self, other
        s0, s1 = QPoly.const(1), QPoly()
        t0, t1 = QPoly(), QPoly.const(1)
        while not r1.is_zero:
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0.is_zero:
            return r0, s0, t0
        scale = 1 / r0.lc
        return r0 * scale, s0 * scale, t0 * scale

    def squarefree_decomposition(self):
        """Yun's algorithm: list of (monic factor, multiplicity)."""
        if self.degree < 1:
            return []
        f = self.monic()
        df = f.derivative()
        a = f.gcd(df)
        b = f.exact_div(a)
        c = df.exact_div(a)
        d = c - b.derivative()
        out = []
        i = 1
        while b.degree > 0:
            g = b.gcd(d)
            if g.degree > 0:
                out.append((g, i))
                b = b.exact_div(g)
                d = d.exact_div(g)
            c2 = d
            d = c2 - b.derivative()
            i += 1
        return out

    def resultant(self, other):
        """Resultant over Q by the Euclidean recurrence."""
        f, g = self, other
        if f.is_zero or g.is_zero:
            return Fraction(0)
        if f.degree == 0:
            return f.lc ** g.degree
        if g.degree == 0:
            return g.lc ** f.degree
        sign = 1
        acc = Fraction(1)
        while g.degree > 0:
            r = f % g
            if r.is_zero:
                return Fraction(0)
            acc *= g.lc ** (f.degree - r.degree)
            if (f.degree % 2) and (g.degree % 2):
                sign = -sign
            f, g = g, r
        acc *= g.lc ** f.degree
        return sign * acc

    def discriminant(self):
        if self.degree < 1:
            raise ValueError("discriminant needs degree >= 1")
        n = self.degree
        res = self.resultant(self.derivative())
        sign = -1 if (n * (n - 1) // 2) % 2 else 1
        return sign * res / self.lc

    # --- integer normal forms ---

    def int_coeffs(self):
        """(integer coefficient list, scale) with scale*self integral and primitive."""
        if self.is_zero:
            return [], Fraction(1)
        den = _ilcm(*[c.denominator for c in self.coeffs])
        ints = [int(c * den) for c in self.coeffs]
        content = 0
        for c in ints:
            content = _igcd(content, abs(c))
        ints = [c // content for c in ints]
        return ints, Fraction(den, content)

    # --- real root location ---

    def cauchy_bound(self):
        """All real (and complex) roots have absolute value below this."""
        if self.degree < 1:
            raise ValueError("root bound needs degree >= 1")
        lead = abs(self.lc)
        return 1 + max(abs(c) / lead for c in self.coeffs[:-1])

    def sturm_chain(self):
        chain = [self, self.derivative()]
        while not chain[-1].is_zero and chain[-1].degree > 0:
            chain.append(-(chain[-2] % chain[-1]))
        if chain[-1].is_zero:
            chain.pop()
        return chain

    @staticmethod
    def _variations(signs):
        signs = [s for s in signs if s]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    def count_real_roots_above(self, x0):
        """Number of distinct real roots strictly greater than x0."""
        x0 = Fraction(x0)
        sf = QPoly.from_pairs(self.squarefree_decomposition())
        while sf(x0) == 0:
            sf = sf.exact_div(QPoly([-x0, 1]))
        if sf.degree < 1:
            return 0
        chain = sf.sturm_chain()
        at_x0 = [_sign(p(x0)) for p in chain]
        at_inf = [_sign(p.lc) for p in chain]
        return self._variations(at_x0) - self._variations(at_inf)

    @classmethod
    def from_pairs(cls, pairs):
        p = cls.const(1)
        for factor, _ in pairs:
            p = p * factor
        return p

    def rational_roots(self):
        """Dict root -> multiplicity of all rational roots.

        Reads the roots off the linear factors of the integer factorization;
        enumerating divisor pairs of the outer coefficients would mean
        factoring integers that can be astronomically hard.
        """
        if self.degree < 1:
            return {}
        ints, _ = self.int_coeffs()
        poly = sympy.Poly(list(reversed(ints)), sympy.Symbol("x"))
        roots = {}
        for factor, mult in poly.factor_list()[1]:
            if factor.degree() == 1:
                lead, const = (int(c) for c in factor.all_coeffs())
                roots[Fraction(-const, lead)] = mult
        return roots

    def complex_roots(self, precision=DEFAULT_BITS):
        """Certified numeric roots: list of (mpc root, multiplicity, error bound).

        Roots are isolated on squarefree factors, so each numeric root is
        simple within its factor and the multiplicity is the factor's.
        """
        out = []
        for factor, mult in self.squarefree_decomposition():
            if factor.degree < 1:
                continue
            ints, _ = factor.int_coeffs()
            desc = list(reversed(ints))
            for attempt in range(4):
                with working_bits(max(precision, DEFAULT_BITS)), extra_bits(40 + 30 * attempt):
                    try:
                        roots, err = mpmath.polyroots(
                            desc, maxsteps=140, extraprec=60 + 40 * attempt, error=True
                        )
                    except mpmath.libmp.NoConvergence:
                        continue
                    if err <= mpmath.mpf(2) ** (-(precision // 2) - 8):
                        out.extend((r, mult, err) for r in roots)
                        break
            else:
                raise PrecisionError(f"roots of {ints} not certified at {precision} bits")
        return out


def _sign(v):
    if isinstance(v, Fraction) or isinstance(v, int):
        return (v > 0) - (v < 0)
    return (v > 0) - (v < 0)


def lagrange_interpolate(points):
    """Exact interpolation through (x, y) Fraction pairs with distinct x."""
    total = QPoly()
    xs = [Fraction(x) for x, _ in points]
    for i, (xi, yi) in enumerate(points):
        xi = Fraction(xi)
        num = QPoly.const(1)
        den = Fraction(1)
        for j, xj in enumerate(xs):
            if j == i:
                continue
            num = num * QPoly([-xj, 1])
            den *= xi - xj
        total = total + num * (Fraction(yi) / den)
    return total


def resultant_in_parameter(poly_matrix_eval, degree_bound):
    """Resultant of parameter-dependent polynomials by exact interpolation.

    `poly_matrix_eval(t)` must return the Fraction resultant value at rational
    t; the result is the unique polynomial of degree <= degree_bound through
    degree_bound + 1 sample points.
    """
    samples = []
    t = 0
    while len(samples) < degree_bound + 1:
        samples.append((Fraction(t), poly_matrix_eval(Fraction(t))))
        t = -t if t > 0 else -t + 1
    return lagrange_interpolate(samples)
