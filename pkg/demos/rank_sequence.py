"""
Scan, lift, certify
===================

Walk the whole pipeline on y^2 = x^3 + 2: scan integer x for values whose
right-hand side is positive and not a square, lift each survivor to a point
over Q(sqrt(d)), and certify that the lifted points are independent.  The
certificate is then serialized, re-verified from its own data, and broken
on purpose to show what the checker catches.
"""

import json

from ellcert import (
    WeierstrassCurve,
    build_sequence,
    canonical_height,
    classify_candidate,
    verify_certificate,
)
from ellcert.jsonio import certificate_to_json

curve = WeierstrassCurve(0, 2)
print(f"curve: y^2 = x^3 + {curve.b}")

# The scan keeps x where w = x^3 + 2 is positive and not a rational square;
# each accepted x contributes the square class d of w.
records, points, certificate = build_sequence(curve, interval_start=1, count=4)
print("\nscan log:")
for r in records:
    verdict = "accepted" if r.accepted else f"rejected ({r.reason})"
    print(f"  x = {r.x}:  w = {r.w}  {verdict}")

print("\nlifted points (conjugation sends each to its negative):")
for p, d in zip(points, certificate.classes):
    print(f"  ({p.x}, {p.y})  in  Q(sqrt({d}))")

# Certification layers: square classes independent over F2, every point
# non-torsion with canonical height above the floor, none rational.
print("\ncanonical heights:")
for p in points:
    print(f"  h({p.x}, ...) = {canonical_height(p)}")
print(f"regulator of the sequence: {certificate.regulator}")

# A rejected x is still worth a look: the explanation is part of the record.
for x in (-1, 25):
    r = classify_candidate(curve, x)
    note = f" ({r.reason})" if r.reason else ""
    print(f"classify x = {x}: {r.status}{note}")

# Round trip: serialize, then let the checker re-derive everything.
doc = certificate_to_json(certificate)
print("\nfresh verification:", verify_certificate(doc) or "all layers pass")

# Now sabotage the stored square class of the second point.  The classes are
# what make the fields linearly disjoint, so the checker must object.
broken = json.loads(json.dumps(doc))
broken["classes"][1] = broken["classes"][0] * 4
print("\nafter tampering with a class:")
for failure in verify_certificate(broken):
    print(f"  {failure}")
