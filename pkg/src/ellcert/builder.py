"""Certified sequences of independent points over a tower of quadratic fields.

A point with rational x and purely irrational y = v*sqrt(d) is sent to its
negative by the conjugation of Q(sqrt(d)), so it is fixed by conjugation
composed with negation.  Scanning x-values whose w(x) = x^3 + ax + b is
positive and square-class-independent produces, after lifting, such points
over pairwise linearly disjoint quadratic fields; independence then needs
only a non-torsion check per point, which is what the certificate records.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

import mpmath

from .curves import canonical_height, regulator, torsion_order
from .scalars import QuadExt, SquareClassBasis, squarefree_kernel

STATUS_ACCEPTED = "accepted"
STATUS_REJECTED = "rejected"
REASON_NONPOSITIVE = "nonpositive"
REASON_SQUARE = "square"
REASON_DEPENDENT = "class-dependent"

LEMMA_BASIS = ("square-class independence", "non-torsion", "not in E(Q)")

DEFAULT_HEIGHT_THRESHOLD = Fraction(1, 10**4)
DEFAULT_REGULATOR_THRESHOLD = Fraction(1, 10**3)


class CertificationError(Exception):
    """An evidence layer failed; the message names the offending point."""


def _as_mpf(value):
    value = Fraction(value)
    return mpmath.mpf(value.numerator) / value.denominator


@dataclass(frozen=True)
class CandidateRecord:
    x: Fraction
    w: Fraction
    d: int
    status: str
    reason: str

    @property
    def accepted(self):
        return self.status == STATUS_ACCEPTED


def is_rational_square(value):
    value = Fraction(value)
    if value < 0:
        return False
    rn, rd = isqrt(value.numerator), isqrt(value.denominator)
    return rn * rn == value.numerator and rd * rd == value.denominator


def classify_candidate(curve, x, basis=None):
    """One CandidateRecord for the x-value, against the basis built so far.

    Acceptance extends the basis in place.  With no basis the class check
    degenerates to "w is not a square", which is the same thing against an
    empty family.
    """
    x = Fraction(x)
    w = curve.rhs(x)
    if w <= 0:
        return CandidateRecord(x, w, 0, STATUS_REJECTED, REASON_NONPOSITIVE)
    if is_rational_square(w):
        return CandidateRecord(x, w, 0, STATUS_REJECTED, REASON_SQUARE)
    if basis is None:
        basis = SquareClassBasis()
    if not basis.extend(w):
        return CandidateRecord(x, w, 0, STATUS_REJECTED, REASON_DEPENDENT)
    return CandidateRecord(x, w, basis.kernels[-1], STATUS_ACCEPTED, "")


def candidate_scan(curve, interval_start, count, stride=1):
    """Scan x = start, start + stride, ... until `count` accepted records.

    The start must lie strictly above every real root of x^3 + ax + b, so
    the positivity of w is structural rather than luck; a start inside the
    non-positive region is rejected with the computed root bound.
    """
    start = Fraction(interval_start)
    stride = Fraction(stride)
    if stride <= 0:
        raise ValueError("stride must be positive")
    if count < 1:
        raise ValueError("count must be positive")
    w_poly = curve.rhs_poly()
    if w_poly(start) <= 0 or w_poly.count_real_roots_above(start) > 0:
        raise ValueError(
            f"interval start {start} is not above the largest real root of "
            f"x^3 + {curve.a}*x + {curve.b}; every real root has absolute "
            f"value below {w_poly.cauchy_bound()}"
        )
    basis = SquareClassBasis()
    records = []
    accepted = 0
    x = start
    limit = 2000 + 400 * count
    for _ in range(limit):
        record = classify_candidate(curve, x, basis)
        records.append(record)
        if record.accepted:
            accepted += 1
            if accepted == count:
                break
        x += stride
    else:
        raise CertificationError(
            f"scan from {start} exhausted {limit} candidates with only "
            f"{accepted} of {count} accepted"
        )
    _reverify_records(curve, records)
    return records


def _reverify_records(curve, records):
    # independent second pass with a fresh basis
    basis = SquareClassBasis()
    for record in records:
        w = curve.rhs(record.x)
        assert w == record.w
        if not record.accepted:
            continue
        assert w > 0
        assert not is_rational_square(w)
        assert squarefree_kernel(w) == record.d
        assert basis.extend(w)


def lift_point(curve, record):
    """The point (x, v*sqrt(d)) over Q(sqrt(d)) above an accepted record."""
    if not record.accepted:
        raise ValueError(f"cannot lift a record rejected as {record.reason}")
    ratio = record.w / record.d
    v = Fraction(isqrt(ratio.numerator), isqrt(ratio.denominator))
    assert v * v == ratio
    point = curve.point(record.x, QuadExt(record.d, 0, v))
    assert point.is_anti_fixed
    assert point.conjugate() == -point
    return point


@dataclass
class IndependenceCertificate:
    curve: object
    points: list
    classes: list
    torsion_screen: list
    regulator: object
    lemma_basis: tuple = field(default=LEMMA_BASIS)


def certify_independence(curve, points, height_threshold=DEFAULT_HEIGHT_THRESHOLD,
                         regulator_points=6, torsion_bound=None,
                         target_error=Fraction(1, 10**6)):
    """Three evidence layers per point, plus an optional numeric regulator.

    Layer one: the square classes of the points' fields are F2-independent,
    so the fields are linearly disjoint.  Layer two: each point is
    non-torsion, shown both by an order search up to the uniform bound and
    by a canonical height above the threshold.  Layer three: each point
    lies outside E(Q).  Any failure aborts with the point identified.
    """
    if not points:
        raise ValueError("nothing to certify")
    height_threshold = _as_mpf(height_threshold)
    basis = SquareClassBasis()
    classes = []
    for i, point in enumerate(points):
        if point.curve != curve:
            raise CertificationError(f"point {i} lies on a different curve")
        if point.is_infinity or point.field_d is None:
            raise CertificationError(f"point {i} is rational, not a quadratic lift")
        if not point.is_anti_fixed:
            raise CertificationError(
                f"point {i} is not sent to its negative by conjugation"
            )
        d = point.field_d
        if not basis.extend(d):
            raise CertificationError(
                f"point {i}: square class {d} depends on the earlier classes"
            )
        classes.append(d)
    screen = []
    for i, point in enumerate(points):
        order = torsion_order(point, bound=torsion_bound)
        if order is not None:
            raise CertificationError(f"point {i} is torsion of order {order}")
        height = canonical_height(point, target_error)
        if not height > height_threshold:
            raise CertificationError(
                f"point {i} has canonical height {height}, not above "
                f"{height_threshold}"
            )
        screen.append({"order_bound": torsion_bound or 18, "height": height})
    reg = None
    if regulator_points:
        reg = regulator(points, count=min(regulator_points, len(points)))
        if not reg > _as_mpf(DEFAULT_REGULATOR_THRESHOLD):
            raise CertificationError(
                f"regulator {reg} of the first {min(regulator_points, len(points))} "
                f"points is not above {DEFAULT_REGULATOR_THRESHOLD}"
            )
    return IndependenceCertificate(
        curve=curve,
        points=list(points),
        classes=classes,
        torsion_screen=screen,
        regulator=reg,
    )


def build_sequence(curve, interval_start=None, count=5, stride=1, **certify_kwargs):
    """Scan, lift and certify in one call; returns (records, points, certificate)."""
    if interval_start is None:
        bound = curve.rhs_poly().cauchy_bound()
        interval_start = Fraction(int(bound) + 1)
    records = candidate_scan(curve, interval_start, count, stride)
    points = [lift_point(curve, r) for r in records if r.accepted]
    certificate = certify_independence(curve, points, **certify_kwargs)
    return records, points, certificate


def points_fixed_by(curve, automorphism, **kwargs):
    """Construction dispatch on the type of fixing automorphism.

    Implemented: "complex-conjugation", where the fixed points come from
    quadratic lifts in the minus eigenspace.  An automorphism that is not a
    conjugation needs a totally imaginary ground-field extension before the
    pencil construction applies; that case is a documented gap, not an
    approximation.
    """
    if automorphism == "complex-conjugation":
        return build_sequence(curve, **kwargs)
    raise NotImplementedError(
        "only the complex-conjugation case is implemented; other automorphisms "
        "require extending the ground field to a totally imaginary number field, "
        "which is outside the computational scope of this package"
    )


def verify_certificate(doc, height_threshold=DEFAULT_HEIGHT_THRESHOLD,
                       float_tolerance=Fraction(1, 10**6)):
    """Re-derive every layer of a serialized certificate from its own data.

    Returns a list of failure strings, empty when the certificate holds.
    Numeric fields (heights, regulator) are recomputed and compared to the
    stored values within float_tolerance; the exact layers are re-derived
    with no tolerance at all.
    """
    from . import jsonio

    height_threshold = _as_mpf(height_threshold)
    float_tolerance = _as_mpf(float_tolerance)
    failures = []
    if doc.get("schema") != jsonio.SCHEMA_CERTIFICATE:
        return [f"unrecognized schema {doc.get('schema')!r}"]
    if list(doc.get("lemma_basis", [])) != list(LEMMA_BASIS):
        failures.append("lemma basis does not list the three evidence layers")
    try:
        curve = jsonio.curve_from_json(doc["curve"])
        points = [jsonio.point_from_json(curve, p) for p in doc["points"]]
    except (KeyError, ValueError, ZeroDivisionError) as exc:
        return failures + [f"points do not parse or lie off the curve: {exc}"]
    classes = list(doc.get("classes", []))
    if len(classes) != len(points):
        failures.append("class list length differs from point list length")
        return failures
    basis = SquareClassBasis()
    for i, (point, d) in enumerate(zip(points, classes)):
        if point.is_infinity or not point.is_anti_fixed:
            failures.append(f"point {i} is not an anti-fixed affine point")
            continue
        if point.field_d != d:
            failures.append(f"point {i} lives in Q(sqrt({point.field_d})), not "
                            f"the recorded Q(sqrt({d}))")
        if squarefree_kernel(d) != d:
            failures.append(f"class {d} of point {i} is not a squarefree kernel")
        if not basis.extend(d):
            failures.append(f"class-dependence: class {d} of point {i} lies in "
                            f"the span of the earlier classes")
    screen = doc.get("torsion_screen", [])
    if len(screen) != len(points):
        failures.append("torsion screen length differs from point list length")
        screen = []
    for i, (point, entry) in enumerate(zip(points, screen)):
        order = torsion_order(point, bound=entry.get("order_bound"))
        if order is not None:
            failures.append(f"point {i} is torsion of order {order}")
            continue
        height = canonical_height(point, Fraction(1, 10**6))
        if not height > height_threshold:
            failures.append(f"point {i} has canonical height {height} below the "
                            f"threshold")
        stored = Fraction(entry["height"]) if "/" in entry["height"] else None
        recorded = float(entry["height"]) if stored is None else float(stored)
        if abs(height - recorded) > float_tolerance * (1 + abs(height)):
            failures.append(f"point {i} height {height} differs from the recorded "
                            f"{recorded}")
    if doc.get("regulator") is not None and not failures:
        reg = regulator(points, count=min(6, len(points)))
        recorded = float(doc["regulator"])
        if not reg > _as_mpf(DEFAULT_REGULATOR_THRESHOLD):
            failures.append(f"regulator {reg} is not above {DEFAULT_REGULATOR_THRESHOLD}")
        if abs(reg - recorded) > float_tolerance * (1 + abs(reg)):
            failures.append(f"regulator {reg} differs from the recorded {recorded}")
    return failures
