"""Command-line front end: dispatch to the modules, emit re-verifiable reports.

One subcommand per pipeline: `points` (scan, lift, certify), `group`
(permutation-group certificate suite), `pencil` (quadratic pencil and
isotropic search), `monodromy`, `symmetrize`, and `verify`, which re-checks
a previously written report from its own data.  Reports are JSON with a
"schema" tag; exit code 0 means success, 2 a clean "not found", 1 an error.
"""

import argparse
import json
import sys
import time
from fractions import Fraction

from . import __version__, jsonio
from .builder import (
    CertificationError,
    build_sequence,
    verify_certificate,
)
from .curves import WeierstrassCurve
from .funcfield import (
    FFElement,
    divisor_of,
    element_from_coordinates,
    fiber_roots,
    rr_basis,
    symmetrize,
)
from .monodromy import monodromy_group
from .pencil import (
    build_pencil,
    isotropic_search,
    min_rank_of_pencil,
    quadratic_value,
    verify_construction,
)
from .perms import (
    Perm,
    PermGroup,
    alternating_min_cycle_count,
    fixed_space_dimension,
    odd_sign_characters,
    transitive_subgroup_scan,
    transposition_power,
)
from .qpoly import QPoly

CONFIG_KEYS = {
    "curve", "count", "start", "stride", "n", "height-bound", "precision",
    "torsion-bound", "out", "exhaustive", "escalate-n", "point", "fu", "fv",
    "points",
}


class UsageError(Exception):
    pass


def _parse_curve(text):
    values = {}
    for part in text.split(","):
        if "=" not in part:
            raise UsageError(f"curve spec {text!r} is not of the form a=...,b=...")
        key, _, value = part.partition("=")
        values[key.strip()] = Fraction(value.strip())
    if set(values) != {"a", "b"}:
        raise UsageError(f"curve spec must give exactly a and b, got {sorted(values)}")
    return WeierstrassCurve(values["a"], values["b"])


def _parse_point(curve, text):
    parts = [Fraction(p.strip()) for p in text.split(",")]
    if len(parts) != 2:
        raise UsageError(f"point spec {text!r} is not of the form x,y")
    return curve.point(parts[0], parts[1])


def _find_rational_point(curve):
    from .builder import is_rational_square
    from math import isqrt

    for num in range(-40, 41):
        for den in (1, 2, 3, 4):
            x = Fraction(num, den)
            w = curve.rhs(x)
            if w >= 0 and is_rational_square(w):
                y = Fraction(isqrt(w.numerator), isqrt(w.denominator))
                if y != 0:
                    return curve.point(x, y)
    raise UsageError("no small rational point found; pass one with point=x,y")


def _parse_poly(text):
    if not text:
        return QPoly([])
    return QPoly([Fraction(p.strip()) for p in text.split(",")])


def _load_config(path):
    values = {}
    with open(path, encoding="utf-8") as handle:
        for raw in handle:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"config line {line!r} is not KEY=VALUE")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in CONFIG_KEYS:
                raise UsageError(f"unknown config key {key!r}")
            values[key] = value.strip()
    return values


def _setting(args, config, key, default=None):
    flag = getattr(args, key.replace("-", "_"), None)
    if flag is not None and flag is not False:
        return flag
    if key in config:
        return config[key]
    return default


def _int_setting(args, config, key, default):
    value = _setting(args, config, key, default)
    return None if value is None else int(value)


def _bool_setting(args, config, key):
    value = _setting(args, config, key, False)
    if isinstance(value, str):
        return value.lower() not in ("", "0", "false", "no")
    return bool(value)


# --- subcommands ---


def cmd_points(args, config):
    curve = _parse_curve(_setting(args, config, "curve", "a=0,b=2"))
    count = _int_setting(args, config, "count", 5)
    start = _setting(args, config, "start")
    stride = Fraction(_setting(args, config, "stride", 1))
    torsion_bound = _int_setting(args, config, "torsion-bound", None)
    records, points, certificate = build_sequence(
        curve,
        interval_start=None if start is None else Fraction(start),
        count=count,
        stride=stride,
        torsion_bound=torsion_bound,
    )
    payload = jsonio.certificate_to_json(certificate)
    payload["scan"] = [
        {
            "x": jsonio.fraction_to_json(r.x),
            "w": jsonio.fraction_to_json(r.w),
            "status": r.status,
            "reason": r.reason or None,
            "d": r.d if r.accepted else None,
        }
        for r in records
    ]
    summary = (f"{len(points)} certified points, classes {certificate.classes}, "
               f"regulator {jsonio.float_to_json(certificate.regulator)}")
    return 0, payload, summary


def cmd_group(args, config):
    n = _int_setting(args, config, "n", 4)
    exhaustive = _bool_setting(args, config, "exhaustive")
    classes = transitive_subgroup_scan(n)
    entries = []
    all_pass = True
    for cls in classes:
        group = cls.representative
        even = group.even_subgroup()
        dims = fixed_space_dimension(n, list(group))
        even_dims = fixed_space_dimension(n, list(even))
        checks = {
            "block_product_order": cls.structure.transposition_subgroup_order,
            "block_size": cls.structure.block_size,
            "block_count": len(cls.structure.blocks),
            "quotient_transitive": cls.structure.quotient_transitive,
            "even_part_transitive": even.is_transitive(),
            "fixed_dim": dims,
            "even_fixed_dim": even_dims,
        }
        ok = (cls.structure.quotient_transitive and even.is_transitive()
              and dims == 1 and even_dims == 1)
        all_pass = all_pass and ok
        entries.append({
            "order": cls.order,
            "scanned_conjugates": cls.scanned_conjugates,
            "is_symmetric": cls.is_symmetric,
            "generators": [jsonio.perm_to_json(g) for g in group.generators],
            "checks": checks,
            "ok": ok,
        })
    minimum, census = alternating_min_cycle_count(n)
    characters = odd_sign_characters(n)
    witnesses_ok = all(ch(ch.witness()) == -1 for ch in characters)
    all_pass = all_pass and witnesses_ok
    payload = {
        "schema": jsonio.SCHEMA_GROUP,
        "n": n,
        "classes": entries,
        "alternating_min_cycle_count": minimum,
        "alternating_census": (
            {str(list(k)): v for k, v in sorted(census.items())} if exhaustive else None
        ),
        "odd_sign_characters": len(characters),
        "sign_witnesses_ok": witnesses_ok,
        "all_pass": all_pass,
    }
    summary = (f"n={n}: {len(entries)} transitive classes, orders "
               f"{[e['order'] for e in entries]}, "
               f"{'all checks pass' if all_pass else 'CHECK FAILURES'}")
    return (0 if all_pass else 1), payload, summary


def _pencil_exclusions(pencil):
    """The two hyperplanes a usable solution must avoid.

    Vectors with vanishing leading coordinate drop the pole order of h (the
    hyperplane at infinity of the coefficient space); vectors with h(-2P) = 0
    break the double-zero normalization.
    """
    nu = pencil.nu
    leading = tuple(Fraction(1 if i == nu - 1 else 0) for i in range(nu))
    minus2 = -(2 * pencil.point)
    evaluation = tuple(mu.evaluate(minus2) for mu in rr_basis(pencil.curve, nu))
    return [leading, evaluation]


def cmd_pencil(args, config):
    curve = _parse_curve(_setting(args, config, "curve", "a=0,b=17"))
    point_text = _setting(args, config, "point")
    point = (_parse_point(curve, point_text) if point_text
             else _find_rational_point(curve))
    n = _int_setting(args, config, "n", 8)
    bound = _int_setting(args, config, "height-bound", 50)
    escalate = _bool_setting(args, config, "escalate-n")
    ns = [n, n + 2, n + 4] if escalate else [n]
    runs = []
    found = False
    for n_current in ns:
        pencil = build_pencil(curve, point, n_current)
        exclusions = _pencil_exclusions(pencil)
        solution = isotropic_search(pencil.phi1, pencil.phi2, bound, exclusions)
        entry = {
            "n": n_current,
            "nu": pencil.nu,
            "phi1": jsonio.matrix_to_json(pencil.phi1),
            "phi2": jsonio.matrix_to_json(pencil.phi2),
            "min_rank": min_rank_of_pencil(pencil.phi1, pencil.phi2),
            "height_bound": bound,
            "excluded_hyperplanes": [
                [jsonio.fraction_to_json(c) for c in form] for form in exclusions
            ],
            "solution": None,
            "verification": None,
        }
        if solution is not None:
            report = verify_construction(pencil, solution)
            entry["solution"] = [jsonio.fraction_to_json(c) for c in solution]
            entry["verification"] = jsonio.construction_report_to_json(report)
            found = found or report.ok
        runs.append(entry)
        if found:
            break
    payload = {
        "schema": jsonio.SCHEMA_PENCIL,
        "curve": jsonio.curve_to_json(curve),
        "point": jsonio.point_to_json(point),
        "outcome": "found" if found else "not found",
        "runs": runs,
    }
    if found:
        summary = f"solution found at n={runs[-1]['n']}, construction verified"
        return 0, payload, summary
    summary = (f"no isotropic vector below height {bound} for n in "
               f"{[r['n'] for r in runs]}; search certificate recorded")
    return 2, payload, summary


def cmd_monodromy(args, config):
    curve = _parse_curve(_setting(args, config, "curve", "a=0,b=17"))
    fu = _parse_poly(_setting(args, config, "fu", "0,1"))
    fv = _parse_poly(_setting(args, config, "fv", ""))
    precision = _int_setting(args, config, "precision", 64)
    f = FFElement(curve, fu, fv)
    result = monodromy_group(f, precision=precision)
    payload = jsonio.monodromy_to_json(result, function=f)
    payload["curve"] = jsonio.curve_to_json(curve)
    witness = None
    for i in range(len(result.branch_points)):
        extracted = transposition_power(result.generators[i])
        if extracted is not None:
            c, perm = extracted
            witness = {"branch_index": i, "power": c,
                       "transposition": jsonio.perm_to_json(perm)}
            break
    payload["transposition_witness"] = witness
    summary = (f"degree {result.degree}, {len(result.generators)} finite branch "
               f"points, group order {payload['group_order']}, "
               f"transitive={payload['transitive']}")
    return 0, payload, summary


def cmd_symmetrize(args, config):
    curve = _parse_curve(_setting(args, config, "curve", "a=0,b=17"))
    n = _int_setting(args, config, "n", 3)
    points_text = _setting(args, config, "points")
    if points_text:
        points = [_parse_point(curve, part) for part in points_text.split(";")]
    else:
        base = _find_rational_point(curve)
        points = [k * base for k in range(1, n)]
        points.append(-sum(range(1, n)) * base)
    sym = symmetrize(curve, points)
    div = fiber_roots(curve, sym)
    recovered = {}
    for zero in div.zeros:
        if zero.exact:
            key = (zero.x, zero.y)
            recovered[key] = recovered.get(key, 0) + zero.multiplicity
    expected = {}
    for p in points:
        key = (p.x, p.y)
        expected[key] = expected.get(key, 0) + 1
    fiber_ok = recovered == expected
    payload = {
        "schema": jsonio.SCHEMA_SYMMETRIZE,
        "curve": jsonio.curve_to_json(curve),
        "points": [jsonio.point_to_json(p) for p in points],
        "coordinates": jsonio.sympoint_to_json(sym),
        "fiber_recovers_inputs": fiber_ok,
    }
    summary = f"{len(points)} points to P^{len(points)-1}, fiber check {'ok' if fiber_ok else 'FAILED'}"
    return (0 if fiber_ok else 1), payload, summary


# --- verification of stored reports ---


def _verify_pencil_payload(payload):
    failures = []
    curve = jsonio.curve_from_json(payload["curve"])
    point = jsonio.point_from_json(curve, payload["point"])
    any_found = False
    for entry in payload["runs"]:
        n = entry["n"]
        pencil = build_pencil(curve, point, n)
        if jsonio.matrix_to_json(pencil.phi1) != entry["phi1"]:
            failures.append(f"n={n}: first form differs from a fresh build")
        if jsonio.matrix_to_json(pencil.phi2) != entry["phi2"]:
            failures.append(f"n={n}: second form differs from a fresh build")
        if min_rank_of_pencil(pencil.phi1, pencil.phi2) != entry["min_rank"]:
            failures.append(f"n={n}: pencil minimum rank differs")
        exclusions = [tuple(Fraction(c) for c in form)
                      for form in entry["excluded_hyperplanes"]]
        if entry["solution"] is None:
            rerun = isotropic_search(pencil.phi1, pencil.phi2,
                                     entry["height_bound"], exclusions)
            if rerun is not None:
                failures.append(f"n={n}: report says not found, but {rerun} is a "
                                f"solution below the recorded bound")
            continue
        vec = tuple(Fraction(c) for c in entry["solution"])
        if quadratic_value(pencil.phi1, vec) != 0 or quadratic_value(pencil.phi2, vec) != 0:
            failures.append(f"n={n}: recorded solution is not isotropic for both forms")
        if any(sum(l * x for l, x in zip(form, vec)) == 0 for form in exclusions):
            failures.append(f"n={n}: recorded solution lies on an excluded hyperplane")
        report = verify_construction(pencil, vec)
        if not report.ok:
            failures.append(f"n={n}: construction re-verification failed")
        else:
            any_found = True
        if entry["verification"] is not None and entry["verification"]["genus"] != report.genus:
            failures.append(f"n={n}: recorded genus differs from re-derived genus")
    if payload["outcome"] != ("found" if any_found else "not found"):
        failures.append("outcome field does not match the runs")
    return failures


def _verify_monodromy_payload(payload):
    failures = []
    degree = payload["degree"]
    generators = [jsonio.perm_from_json(g) for g in payload["generators"]]
    infinity = jsonio.perm_from_json(payload["infinity_generator"])
    for i, (gen, bp) in enumerate(zip(generators, payload["branch"])):
        if list(gen.cycle_type()) != list(bp["multiplicities"]):
            failures.append(f"generator {i} cycle type differs from its branch profile")
    if infinity.cycle_type() != (degree,):
        failures.append("infinity generator is not a single cycle")
    product = Perm.identity(degree)
    for g in generators:
        product = g * product
    product = infinity * product
    if not product.is_identity:
        failures.append("ordered product of all generators is not the identity")
    group = PermGroup(generators + [infinity], degree=degree)
    if group.is_transitive() != payload["transitive"]:
        failures.append("transitivity flag differs from the generated group")
    if group.order != payload["group_order"]:
        failures.append("group order differs from the generated group")
    hurwitz = sum(degree - len(g.cycles(include_fixed=True))
                  for g in generators + [infinity])
    if hurwitz != payload["hurwitz_sum"]:
        failures.append("branching sum differs from the stored value")
    return failures


def _verify_symmetrize_payload(payload):
    failures = []
    curve = jsonio.curve_from_json(payload["curve"])
    points = [jsonio.point_from_json(curve, p) for p in payload["points"]]
    sym = symmetrize(curve, points)
    if jsonio.sympoint_to_json(sym) != payload["coordinates"]:
        failures.append("coordinates differ from a fresh symmetrization")
    return failures


def _verify_group_payload(payload):
    failures = []
    code, fresh, _ = cmd_group(
        argparse.Namespace(n=payload["n"], exhaustive=payload["alternating_census"] is not None),
        {},
    )
    if code != 0:
        failures.append("fresh group suite reports failures")
    if [e["order"] for e in fresh["classes"]] != [e["order"] for e in payload["classes"]]:
        failures.append("class list differs from a fresh scan")
    if fresh["alternating_min_cycle_count"] != payload["alternating_min_cycle_count"]:
        failures.append("alternating minimum differs from a fresh census")
    return failures


def cmd_verify(args, _config):
    with open(args.report_path, encoding="utf-8") as handle:
        doc = json.load(handle)
    payload = doc["result"] if doc.get("schema") == jsonio.SCHEMA_REPORT else doc
    schema = payload.get("schema")
    if schema == jsonio.SCHEMA_CERTIFICATE:
        failures = verify_certificate(payload)
    elif schema == jsonio.SCHEMA_PENCIL:
        failures = _verify_pencil_payload(payload)
    elif schema == jsonio.SCHEMA_MONODROMY:
        failures = _verify_monodromy_payload(payload)
    elif schema == jsonio.SCHEMA_SYMMETRIZE:
        failures = _verify_symmetrize_payload(payload)
    elif schema == jsonio.SCHEMA_GROUP:
        failures = _verify_group_payload(payload)
    else:
        failures = [f"unrecognized schema {schema!r}"]
    payload_out = {"report": args.report_path, "failures": failures,
                   "verdict": "pass" if not failures else "fail"}
    summary = ("PASS" if not failures
               else f"FAIL: {failures[0]}")
    return (0 if not failures else 1), payload_out, summary


COMMANDS = {
    "points": cmd_points,
    "group": cmd_group,
    "pencil": cmd_pencil,
    "monodromy": cmd_monodromy,
    "symmetrize": cmd_symmetrize,
    "verify": cmd_verify,
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="ellcert",
        description="certified elliptic-curve point sequences and the covers behind them",
    )
    sub = parser.add_subparsers(dest="command")
    for name in ("points", "group", "pencil", "monodromy", "symmetrize"):
        p = sub.add_parser(name)
        p.add_argument("--curve", help="a=...,b=...")
        p.add_argument("--count", type=int)
        p.add_argument("--start")
        p.add_argument("--n", type=int)
        p.add_argument("--height-bound", type=int)
        p.add_argument("--precision", type=int)
        p.add_argument("--torsion-bound", type=int)
        p.add_argument("--out")
        p.add_argument("--exhaustive", action="store_true")
        p.add_argument("--escalate-n", action="store_true")
        p.add_argument("--config", help="KEY=VALUE file; flags win on conflict")
    v = sub.add_parser("verify")
    v.add_argument("report_path")
    v.add_argument("--out")
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_usage(sys.stderr)
        return 1
    try:
        config = _load_config(args.config) if getattr(args, "config", None) else {}
        started = time.monotonic()
        code, payload, summary = COMMANDS[args.command](args, config)
        elapsed_ms = int((time.monotonic() - started) * 1000)
    except (UsageError, CertificationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    report = {
        "schema": jsonio.SCHEMA_REPORT,
        "command": args.command,
        "config": {k: str(v) for k, v in sorted(config.items())},
        "result": payload,
        "timing_ms": elapsed_ms,
        "version": __version__,
    }
    text = json.dumps(report, indent=2)
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
    else:
        print(text)
    print(f"{args.command}: {summary}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
