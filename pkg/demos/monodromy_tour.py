"""
Monodromy of functions on an elliptic curve
===========================================

A nonconstant function f on E is a branched cover E -> P^1.  Following the
fiber of f around each branch value gives one permutation per value; together
with the cycle at infinity their ordered product is the identity, and the
group they generate is the monodromy group of the cover.  The permutations
come from certified numeric tracking, but everything printed below is checked
against exact data: branch profiles from resultants, the product identity,
and the genus from the branching sum.
"""

from ellcert import FFElement, WeierstrassCurve, monodromy_group
from ellcert.monodromy import extract_transposition
from ellcert.qpoly import QPoly


def tour(curve, f, label):
    print(f"--- f = {label} on y^2 = x^3 + {curve.a}x + {curve.b}")
    result = monodromy_group(f)
    print(f"degree {result.degree} cover, base point lambda = {result.base}")
    for i, bp in enumerate(result.branch_points):
        where = bp.exact if bp.exact is not None else bp.value
        print(f"  branch value {where}: profile {bp.multiplicities}, "
              f"loop acts as {result.generators[i]}")
    print(f"  at infinity: {result.infinity_generator}")

    # The loops compose, rightmost first, to the inverse of the loop around
    # infinity; so the full product over every branch value is the identity.
    product = result.infinity_generator
    for g in reversed(result.generators):
        product = product * g
    print("product of all generators is the identity:", product.is_identity)

    group = result.group()
    print(f"monodromy group: order {group.order}, transitive {group.is_transitive()}")

    # Branching sum B and the genus of the cover: 2g - 2 = -2 deg + B, and a
    # cover by an elliptic curve must come out at genus one.
    b = result.hurwitz_sum()
    genus = (b - 2 * result.degree + 2) // 2
    print(f"branching sum {b}, so the covering surface has genus {genus}")

    # Some single loop, raised to an odd power, often isolates a transposition.
    for i in range(len(result.branch_points)):
        t = extract_transposition(result, i)
        if t is not None:
            print(f"an odd power of generator {i} is the transposition {t}")
            break
    print()


curve = WeierstrassCurve(0, 17)

# x has a double pole at O: a degree two cover branched at the roots of the
# cubic and at infinity.
tour(curve, FFElement.x(curve), "x")

# x + y has degree three; its critical values are no longer real, so the
# loop bookkeeping has to get the crossing order right.
tour(curve, FFElement(curve, QPoly([0, 1]), QPoly.const(1)), "x + y")

# x^2 keeps the critical values of x but doubles the sheets; the fiber over
# 0 collapses in pairs and one branch value picks up profile (2, 2).
tour(curve, FFElement(curve, QPoly([0, 0, 1])), "x^2")
