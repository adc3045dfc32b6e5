"""Exact scalar arithmetic: square classes of rationals and real quadratic fields.

Rationals are stdlib `fractions.Fraction` throughout the library. This module
adds the two exact structures built on top of them: square classes in
Q*/(Q*)^2 represented by signed squarefree kernels, and elements u + v*sqrt(d)
of a real quadratic field Q(sqrt(d)).
"""

from dataclasses import dataclass
from fractions import Fraction

import mpmath
import sympy

from .precision import DEFAULT_BITS, PrecisionError, extra_bits, working_bits


def squarefree_kernel(value):
    """Signed squarefree part of a nonzero rational.

    The kernel of p/q is the kernel of p*q, so the result represents the
    class of the input in Q*/(Q*)^2. Examples: 12 -> 3, -18 -> -2,
    8/9 -> 2.
    """
    value = Fraction(value)
    if value == 0:
        raise ValueError("square class of 0 is undefined")
    n = value.numerator * value.denominator
    sign = -1 if n < 0 else 1
    kernel = sign
    for prime, exp in sympy.factorint(abs(n)).items():
        if exp % 2:
            kernel *= prime
    return kernel


def exponent_vector(value):
    """Support of the square class as a frozenset over primes, with -1 for the sign.

    This is the F2 exponent vector of the class written sparsely; the empty
    set is the trivial class.
    """
    n = int(value) if isinstance(value, int) else None
    if n is None:
        value = Fraction(value)
        if value == 0:
            raise ValueError("square class of 0 is undefined")
        n = value.numerator * value.denominator
    elif n == 0:
        raise ValueError("square class of 0 is undefined")
    support = set()
    if n < 0:
        support.add(-1)
        n = -n
    for prime, exp in sympy.factorint(n).items():
        if exp % 2:
            support.add(int(prime))
    return frozenset(support)


class SquareClassBasis:
    """Greedily built F2-independent family of square classes.

    `extend` accepts a candidate exactly when its exponent vector is
    independent of the span of the family so far (the trivial class is
    always rejected). Independence of the classes is equivalent to linear
    disjointness of the quadratic fields Q(sqrt(d_i)).
    """

    def __init__(self, values=()):
        self.kernels = []
        self._echelon = {}  # pivot prime -> reduced vector (frozenset)
        for v in values:
            if not self.extend(v):
                raise ValueError(f"{v!r} is F2-dependent on the classes before it")

    def __len__(self):
        return len(self.kernels)

    def _reduce(self, vec):
        vec = set(vec)
        while vec:
            pivot = max(vec)
            if pivot not in self._echelon:
                return vec, pivot
            vec ^= self._echelon[pivot]
        return vec, None

    def is_independent(self, value):
        residue, _ = self._reduce(exponent_vector(value))
        return bool(residue)

    def extend(self, value):
        """Try to add a class; returns True if accepted."""
        kernel = squarefree_kernel(value)
        residue, pivot = self._reduce(exponent_vector(kernel))
        if not residue:
            return False
        self._echelon[pivot] = frozenset(residue)
        self.kernels.append(kernel)
        return True


def square_class_extend(basis, candidate):
    """Functional form of `SquareClassBasis.extend`.

    Returns (accepted, basis). The basis object is updated in place when the
    candidate is accepted.
    """
    return basis.extend(candidate), basis


def _as_quadext_operand(other, d):
    if isinstance(other, QuadExt):
        if other.d == d:
            return other.u, other.v
        if other.v == 0:
            return other.u, Fraction(0)
        return None
    if isinstance(other, (int, Fraction)):
        return Fraction(other), Fraction(0)
    return None


_VALID_D = set()


def _validate_d(d):
    if d not in _VALID_D:
        if d in (0, 1) or squarefree_kernel(d) != d:
            raise ValueError(f"d must be squarefree and not 0 or 1, got {d}")
        _VALID_D.add(d)
    return d


@dataclass(frozen=True)
class QuadExt:
    """Element u + v*sqrt(d) of the real quadratic field Q(sqrt(d)).

    d must be a squarefree integer other than 0 and 1. Arithmetic mixes
    freely with ints and Fractions; mixing two genuinely irrational elements
    of different fields raises.
    """

    d: int
    u: Fraction
    v: Fraction

    def __post_init__(self):
        _validate_d(self.d)
        object.__setattr__(self, "u", Fraction(self.u))
        object.__setattr__(self, "v", Fraction(self.v))

    # --- structure ---

    @property
    def is_rational(self):
        return self.v == 0

    def conjugate(self):
        return QuadExt(self.d, self.u, -self.v)

    def norm(self):
        """Field norm u^2 - d*v^2, a rational."""
        return self.u * self.u - self.d * self.v * self.v

    def trace(self):
        return 2 * self.u

    def to_fraction(self):
        if self.v != 0:
            raise ValueError(f"{self} is irrational")
        return self.u

    def min_poly_int(self):
        """Primitive integer minimal polynomial, ascending coefficients."""
        if self.v == 0:
            p, q = self.u.numerator, self.u.denominator
            return [-p, q]
        # z^2 - 2u z + (u^2 - d v^2), cleared and made primitive
        c0, c1, c2 = self.norm(), -2 * self.u, Fraction(1)
        from math import gcd, lcm

        scale = lcm(c0.denominator, c1.denominator)
        ints = [int(c * scale) for c in (c0, c1, c2)]
        g = gcd(*ints)
        return [c // g for c in ints]

    # --- arithmetic ---

    def __add__(self, other):
        op = _as_quadext_operand(other, self.d)
        if op is None:
            return NotImplemented
        u, v = op
        return QuadExt(self.d, self.u + u, self.v + v)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(self.d, -self.u, -self.v)

    def __sub__(self, other):
        op = _as_quadext_operand(other, self.d)
        if op is None:
            return NotImplemented
        u, v = op
        return QuadExt(self.d, self.u - u, self.v - v)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        op = _as_quadext_operand(other, self.d)
        if op is None:
            return NotImplemented
        u, v = op
        return QuadExt(self.d, self.u * u + self.d * self.v * v, self.u * v + self.v * u)

    __rmul__ = __mul__

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(d))")
        return QuadExt(self.d, self.u / n, -self.v / n)

    def __truediv__(self, other):
        op = _as_quadext_operand(other, self.d)
        if op is None:
            return NotImplemented
        u, v = op
        return self * QuadExt(self.d, u, v).inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.v == 0 and self.u == other
        if isinstance(other, QuadExt):
            if self.v == 0 and other.v == 0:
                return self.u == other.u
            return self.d == other.d and self.u == other.u and self.v == other.v
        return NotImplemented

    def __hash__(self):
        if self.v == 0:
            return hash(self.u)
        return hash((self.d, self.u, self.v))

    def __bool__(self):
        return self.u != 0 or self.v != 0

    def to_mpf(self):
        if self.d < 0:
            raise ValueError(f"sqrt({self.d}) is not real; use to_mpc")
        return mpmath.mpf(self.u.numerator) / self.u.denominator + (
            mpmath.mpf(self.v.numerator) / self.v.denominator
        ) * mpmath.sqrt(self.d)

    def to_mpc(self):
        root = mpmath.sqrt(mpmath.mpc(self.d))
        return mpmath.mpc(self.u.numerator) / self.u.denominator + (
            mpmath.mpc(self.v.numerator) / self.v.denominator
        ) * root

    def __repr__(self):
        if self.v == 0:
            return f"{self.u}"
        return f"({self.u} + {self.v}*sqrt({self.d}))"


def ensure_same_field(*elements):
    """Common d of a batch of scalars, or None if all are rational."""
    d = None
    for e in elements:
        if isinstance(e, QuadExt) and e.v != 0:
            if d is None:
                d = e.d
            elif e.d != d:
                raise ValueError(f"mixed quadratic fields: sqrt({d}) and sqrt({e.d})")
    return d


def mahler_height(int_coeffs, field_degree=None, precision=DEFAULT_BITS):
    """Absolute logarithmic Weil height from a minimal polynomial.

    `int_coeffs` are ascending integer coefficients of a primitive polynomial
    that is irreducible over Q. Returns (1/deg) * log M where M is the Mahler
    measure |lead| * prod max(1, |root|), as an mpf at the requested
    precision with error below 2^(-precision/2).

    Worked values: z - 2 -> log 2, z^2 - 2 -> (1/2) log 2, 2z - 3 -> log 3.
    """
    coeffs = [int(c) for c in int_coeffs]
    if any(c != orig for c, orig in zip(coeffs, int_coeffs)):
        raise ValueError("coefficients must be integers")
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) <= 1:
        raise ValueError("polynomial must be nonconstant and nonzero")
    from math import gcd

    if gcd(*[abs(c) for c in coeffs]) != 1:
        raise ValueError("polynomial must be primitive (content 1)")
    deg = len(coeffs) - 1
    if field_degree is not None:
        if field_degree < 1 or field_degree % deg != 0:
            raise ValueError(
                f"field degree {field_degree} incompatible with a degree-{deg} minimal polynomial"
            )
    if deg > 1:
        poly = sympy.Poly(list(reversed(coeffs)), sympy.Symbol("z"))
        if not poly.is_irreducible:
            raise ValueError("polynomial is reducible over Q")
    bits = max(precision, DEFAULT_BITS)
    if deg == 1:
        # measure is max(|a1|, |a0|) exactly
        with working_bits(bits):
            return mpmath.log(max(abs(coeffs[1]), abs(coeffs[0])))
    for attempt in range(4):
        with working_bits(bits), extra_bits(40 + 20 * attempt):
            try:
                roots, err = mpmath.polyroots(
                    list(reversed(coeffs)), maxsteps=120, extraprec=60 + 40 * attempt, error=True
                )
            except mpmath.libmp.NoConvergence:
                continue
            if err > mpmath.mpf(2) ** (-(precision // 2) - 10):
                continue
            measure = mpmath.log(abs(coeffs[-1]))
            for r in roots:
                m = abs(r)
                if m > 1:
                    measure += mpmath.log(m)
            with working_bits(bits):
                return +measure / deg
    raise PrecisionError(f"could not certify roots of {coeffs} at {precision} bits")


def weil_height(x, precision=DEFAULT_BITS):
    """Absolute Weil height of a rational or quadratic scalar."""
    if isinstance(x, QuadExt):
        if x.v == 0:
            x = x.u
        else:
            return mahler_height(x.min_poly_int(), precision=precision)
    x = Fraction(x)
    with working_bits(max(precision, DEFAULT_BITS)):
        return mpmath.log(max(abs(x.numerator), x.denominator))
