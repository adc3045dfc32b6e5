"""JSON forms of every object the reports carry.

Rationals travel as strings "p/q" (plain "p" for integers), elements of
Q(sqrt(d)) as {"d", "u", "v"}, curves as {"a", "b"}, affine points as
{"x", "y"} and the origin as "O".  Every top-level document gets a
"schema" tag so the verifier can dispatch without guessing.
"""

from fractions import Fraction

import mpmath

from .curves import CurvePoint, WeierstrassCurve
from .funcfield import FFElement, SymPoint
from .perms import Perm
from .qpoly import QPoly
from .scalars import QuadExt

SCHEMA_CERTIFICATE = "ellcert/certificate/1"
SCHEMA_PENCIL = "ellcert/pencil/1"
SCHEMA_MONODROMY = "ellcert/monodromy/1"
SCHEMA_SYMMETRIZE = "ellcert/symmetrize/1"
SCHEMA_GROUP = "ellcert/group/1"
SCHEMA_REPORT = "ellcert/report/1"

FLOAT_DIGITS = 17


def fraction_to_json(value):
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def fraction_from_json(text):
    return Fraction(text)


def scalar_to_json(value):
    if isinstance(value, QuadExt):
        return {
            "d": value.d,
            "u": fraction_to_json(value.u),
            "v": fraction_to_json(value.v),
        }
    return fraction_to_json(value)


def scalar_from_json(obj):
    if isinstance(obj, dict):
        return QuadExt(obj["d"], fraction_from_json(obj["u"]), fraction_from_json(obj["v"]))
    return fraction_from_json(obj)


def float_to_json(value):
    return mpmath.nstr(mpmath.mpf(value), FLOAT_DIGITS, strip_zeros=True)


def complex_to_json(value):
    value = mpmath.mpc(value)
    return {"re": float_to_json(value.real), "im": float_to_json(value.imag)}


def curve_to_json(curve):
    return {"a": fraction_to_json(curve.a), "b": fraction_to_json(curve.b)}


def curve_from_json(obj):
    return WeierstrassCurve(fraction_from_json(obj["a"]), fraction_from_json(obj["b"]))


def point_to_json(point):
    if point.is_infinity:
        return "O"
    return {"x": scalar_to_json(point.x), "y": scalar_to_json(point.y)}


def point_from_json(curve, obj):
    if obj == "O":
        return curve.infinity()
    return CurvePoint(curve, scalar_from_json(obj["x"]), scalar_from_json(obj["y"]))


def qpoly_to_json(poly):
    return [fraction_to_json(c) for c in poly.coeffs]


def qpoly_from_json(arr):
    return QPoly([fraction_from_json(c) for c in arr])


def ffelement_to_json(f):
    return {"u": qpoly_to_json(f.u), "v": qpoly_to_json(f.v)}


def ffelement_from_json(curve, obj):
    return FFElement(curve, qpoly_from_json(obj["u"]), qpoly_from_json(obj["v"]))


def sympoint_to_json(sym):
    return [fraction_to_json(c) for c in sym.coords]


def sympoint_from_json(n, arr):
    return SymPoint(n, tuple(fraction_from_json(c) for c in arr))


def perm_to_json(perm):
    return list(perm.images)


def perm_from_json(arr):
    return Perm(arr)


def matrix_to_json(rows):
    return [[fraction_to_json(entry) for entry in row] for row in rows]


def matrix_from_json(rows):
    return [[fraction_from_json(entry) for entry in row] for row in rows]


def certificate_to_json(cert):
    return {
        "schema": SCHEMA_CERTIFICATE,
        "curve": curve_to_json(cert.curve),
        "points": [point_to_json(p) for p in cert.points],
        "classes": list(cert.classes),
        "torsion_screen": [
            {"order_bound": entry["order_bound"], "height": float_to_json(entry["height"])}
            for entry in cert.torsion_screen
        ],
        "regulator": None if cert.regulator is None else float_to_json(cert.regulator),
        "lemma_basis": list(cert.lemma_basis),
    }


def construction_report_to_json(report):
    return {
        "h": ffelement_to_json(report.h),
        "f": ffelement_to_json(report.f),
        "base_value": fraction_to_json(report.base_value),
        "functional_values": [fraction_to_json(v) for v in report.functional_values],
        "tangent_point_value": fraction_to_json(report.tangent_point_value),
        "double_zero_ok": report.double_zero_ok,
        "odd_zeros_ok": report.odd_zeros_ok,
        "genus": report.genus,
        "branch_profile": [
            {"factor": "infinity" if factor == "infinity" else qpoly_to_json(factor),
             "multiplicity": mult}
            for factor, mult in report.branch_profile
        ],
        "ok": report.ok,
    }


def monodromy_to_json(result, function=None):
    doc = {
        "schema": SCHEMA_MONODROMY,
        "degree": result.degree,
        "base": fraction_to_json(result.base),
        "branch": [
            {
                "value": complex_to_json(bp.value),
                "exact": None if bp.exact is None else fraction_to_json(bp.exact),
                "multiplicities": list(bp.multiplicities),
            }
            for bp in result.branch_points
        ],
        "generators": [perm_to_json(g) for g in result.generators],
        "infinity_generator": perm_to_json(result.infinity_generator),
        "group_order": result.group().order,
        "transitive": result.is_transitive(),
        "hurwitz_sum": result.hurwitz_sum(),
    }
    if function is not None:
        doc["function"] = ffelement_to_json(function)
    return doc
