"""Monodromy of the n-sheeted cover lambda -> {zeros of f - lambda}.

Branch data is exact: the zeros of D(f) carry the fiber multiplicities
(ord + 1). The sheet permutations are computed by certified numeric
continuation along circle-and-spoke loops, with a collision guard that
halves the step before any two sheets can swap silently, and precision
doubling on failure.
"""

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .funcfield import FFElement, divisor_of, _to_mpc
from .perms import Perm, PermGroup, fixed_space_dimension, transposition_power
from .precision import DEFAULT_BITS, PrecisionError
from .qpoly import QPoly


@dataclass
class BranchPoint:
    """A finite branch value with its fiber multiplicity profile."""

    value: object
    exact: object
    multiplicities: tuple

    @property
    def local_cycle_type(self):
        return self.multiplicities


@dataclass
class MonodromyResult:
    degree: int
    base: Fraction
    sheets: list
    branch_points: list
    generators: list
    infinity_generator: Perm

    def all_generators(self):
        return list(self.generators) + [self.infinity_generator]

    def group(self, max_order=200000):
        return PermGroup(self.all_generators(), degree=self.degree, max_order=max_order)

    def is_transitive(self):
        return fixed_space_dimension(self.degree, self.all_generators()) == 1

    def hurwitz_sum(self):
        """Sum of (n - cycle count) over all generators, infinity included."""
        n = self.degree
        return sum(n - len(g.cycles(include_fixed=True)) for g in self.all_generators())


def critical_values(f, precision=DEFAULT_BITS):
    """Finite branch values of f with exact multiplicity profiles.

    Each zero Q of D(f) of order e gives a zero of f - f(Q) of order e + 1;
    values are clustered numerically, profiles padded with ones to sum n.
    """
    if f.is_zero or (f.u.degree < 1 and f.v.is_zero):
        raise ValueError("constant function has no branch values")
    n = f.pole_order()
    entries = []
    div = divisor_of(f.derivative(), precision)
    for zero in div.zeros:
        x0, y0 = zero.approx()
        value = f.eval_mp(x0, y0)
        exact = None
        if zero.exact and isinstance(zero.x, Fraction):
            vx = f.v(zero.x)
            if isinstance(zero.y, Fraction):
                exact = f.u(zero.x) + vx * zero.y
            elif vx == 0:
                # irrational y multiplied away, the value is still rational
                exact = f.u(zero.x)
        entries.append((value, exact, zero.multiplicity + 1))
    tol = mpmath.mpf(2) ** (-(precision // 4))
    clusters = []
    for value, exact, mult in entries:
        for cluster in clusters:
            if exact is not None and cluster["exact"] is not None:
                if exact == cluster["exact"]:
                    cluster["mults"].append(mult)
                    break
            elif abs(value - cluster["value"]) < tol:
                cluster["mults"].append(mult)
                if exact is not None:
                    cluster["exact"] = exact
                break
        else:
            clusters.append({"value": value, "exact": exact, "mults": [mult]})
    points = []
    for cluster in clusters:
        heavy = sum(cluster["mults"])
        if heavy > n:
            raise AssertionError("fiber multiplicities exceed the degree")
        profile = tuple(sorted(cluster["mults"] + [1] * (n - heavy), reverse=True))
        points.append(BranchPoint(cluster["value"], cluster["exact"], profile))
    points.sort(key=lambda bp: (mpmath.arg(bp.value) % (2 * mpmath.pi), abs(bp.value)))
    return points


# --- continuation machinery ---


def _sheet_distance(p, q):
    return abs(p[0] - q[0]) + abs(p[1] - q[1])


def _min_pairwise(sheets):
    best = None
    for i in range(len(sheets)):
        for j in range(i + 1, len(sheets)):
            d = _sheet_distance(sheets[i], sheets[j])
            if best is None or d < best:
                best = d
    return best


class _Tracker:
    def __init__(self, f, tol):
        curve = f.curve
        self.u, self.v = f.u, f.v
        self.up, self.vp = f.u.derivative(), f.v.derivative()
        self.w = curve.rhs_poly()
        self.wp = self.w.derivative()
        self.tol = tol

    def newton(self, x, y, lam):
        for _ in range(50):
            f1 = self.u.eval_mp(x) + self.v.eval_mp(x) * y - lam
            f2 = y * y - self.w.eval_mp(x)
            if abs(f1) + abs(f2) < self.tol:
                return x, y
            j11 = self.up.eval_mp(x) + self.vp.eval_mp(x) * y
            j12 = self.v.eval_mp(x)
            j21 = -self.wp.eval_mp(x)
            j22 = 2 * y
            det = j11 * j22 - j12 * j21
            if abs(det) < self.tol * self.tol:
                return None
            dx = (-f1 * j22 + f2 * j12) / det
            dy = (-f2 * j11 + f1 * j21) / det
            x, y = x + dx, y + dy
        return None

    def advance(self, sheets, lam):
        out = []
        for x, y in sheets:
            moved = self.newton(x, y, lam)
            if moved is None:
                return None
            out.append(moved)
        return out

    def track_segment(self, lam0, lam1, sheets):
        t = Fraction(0)
        step = Fraction(1, 4)
        while t < 1:
            step = min(step, 1 - t)
            frac = t + step
            target = lam0 + (lam1 - lam0) * mpmath.mpf(frac.numerator) / frac.denominator
            guard = _min_pairwise(sheets) / 3
            moved = self.advance(sheets, target)
            ok = moved is not None and all(
                _sheet_distance(a, b) < guard for a, b in zip(sheets, moved)
            )
            if ok:
                sheets = moved
                t += step
                step = step * 2
            else:
                step = step / 2
                if step < Fraction(1, 2**16):
                    raise PrecisionError("continuation step underflow")
        return sheets

    def track_waypoints(self, waypoints, sheets):
        lam0 = waypoints[0]
        for lam1 in waypoints[1:]:
            sheets = self.track_segment(lam0, lam1, sheets)
            lam0 = lam1
        return sheets


def _unit(z):
    return z / abs(z)


def _circle_nodes(center, radius, start_angle, count=16):
    nodes = []
    for k in range(count + 1):
        theta = start_angle + 2 * mpmath.pi * k / count
        nodes.append(center + radius * mpmath.exp(1j * theta))
    return nodes


def _segment_nodes(a, b, obstacles):
    """Waypoints from a to b with counterclockwise arcs around obstacles."""
    nodes = [a]
    direction = b - a
    length = abs(direction)
    if length == 0:
        return nodes
    unit = direction / length
    events = []
    for center, radius in obstacles:
        rel = (center - a) / unit
        t, offset = rel.real, rel.imag
        if abs(offset) >= radius or t <= radius / 2 or t >= length - radius / 2:
            continue
        half = mpmath.sqrt(radius * radius - offset * offset)
        events.append((t - half, t + half, center, radius))
    events.sort(key=lambda e: e[0])
    for t_in, t_out, center, radius in events:
        p_in = a + unit * t_in
        p_out = a + unit * t_out
        ang_in = mpmath.arg(p_in - center)
        ang_out = mpmath.arg(p_out - center)
        while ang_out < ang_in:
            ang_out += 2 * mpmath.pi
        steps = 8
        nodes.append(p_in)
        for k in range(1, steps):
            theta = ang_in + (ang_out - ang_in) * k / steps
            nodes.append(center + radius * mpmath.exp(1j * theta))
        nodes.append(p_out)
    nodes.append(b)
    return nodes


def _initial_fiber(f, base, precision):
    curve = f.curve
    w = curve.rhs_poly()
    sheets = []
    if f.v.is_zero:
        poly = f.u - base
        for x0, mult, _err in poly.complex_roots(precision):
            if mult != 1:
                return None
            y0 = mpmath.sqrt(w.eval_mp(x0))
            if abs(y0) == 0:
                return None
            sheets.append((x0, y0))
            sheets.append((x0, -y0))
    else:
        shifted = f.u - base
        norm = shifted * shifted - f.v * f.v * w
        for x0, mult, _err in norm.complex_roots(precision):
            if mult != 1:
                return None
            denom = f.v.eval_mp(x0)
            if abs(denom) == 0:
                return None
            sheets.append((x0, (mpmath.mpf(base.numerator) / base.denominator
                                - f.u.eval_mp(x0)) / denom))
    return sheets


def _match_permutation(start, end):
    guard = _min_pairwise(start) / 3
    images = [None] * len(start)
    used = set()
    for i, pos in enumerate(end):
        best, best_j = None, None
        for j, ref in enumerate(start):
            d = _sheet_distance(pos, ref)
            if best is None or d < best:
                best, best_j = d, j
        if best >= guard or best_j in used:
            raise PrecisionError("ambiguous sheet matching after a loop")
        used.add(best_j)
        images[i] = best_j
    return Perm(images)


def _slit_word(path, crit_pts):
    """Crossings of the path with the downward vertical ray below each c_j.

    Cutting the plane along those rays leaves a simply connected region, so
    the homotopy class of a based path is the sequence of ray crossings.
    Each crossing is reported as (j, +1) when the segment passes below c_j
    moving right, (j, -1) moving left.  A half-open convention on segment
    endpoints counts a crossing through a waypoint exactly once.
    """
    word = []
    for seg in range(len(path) - 1):
        p, q = path[seg], path[seg + 1]
        px, qx = p.real, q.real
        if px == qx:
            continue
        events = []
        for j, c in enumerate(crit_pts):
            xr = c.real
            if (px < xr <= qx) or (qx <= xr < px):
                t = (xr - px) / (qx - px)
                y = p.imag + t * (q.imag - p.imag)
                if y < c.imag:
                    sign = 1 if qx > px else -1
                    # simultaneous crossings happen when two branch values
                    # share a real part; tilting the rays infinitesimally
                    # puts the higher one first on a rightward pass
                    events.append((float(t), -sign * float(c.imag), j, sign))
        events.sort(key=lambda e: (e[0], e[1]))
        word.extend((j, sign) for _t, _k, j, sign in events)
    return word


def _reduce_word(word):
    out = []
    for letter in word:
        if out and out[-1][0] == letter[0] and out[-1][1] == -letter[1]:
            out.pop()
        else:
            out.append(letter)
    return out


def _solve_slit_generators(words, tracked, degree):
    """Permutations of the canonical ray-crossing loops.

    words[i] expresses tracked loop i in the canonical generators d_j; it
    must use its own letter exactly once, so tracked[i] conjugated by the
    solved prefix and suffix recovers d_i.  Dependencies are acyclic because
    loop i can only pass below a branch value that sits above its corridor.
    """
    k = len(words)
    solved = [None] * k

    def evaluate(part):
        p = Perm.identity(degree)
        for j, sign in part:
            d = solved[j]
            p = (d if sign > 0 else d.inverse()) * p
        return p

    remaining = set(range(k))
    while remaining:
        progressed = False
        for i in sorted(remaining):
            word = words[i]
            own = [t for t, (j, _s) in enumerate(word) if j == i]
            if len(own) != 1 or word[own[0]][1] != 1:
                raise PrecisionError("loop crossing word is malformed")
            pos = own[0]
            rest = word[:pos] + word[pos + 1:]
            if any(solved[j] is None for j, _s in rest):
                continue
            pre = evaluate(word[:pos])
            post = evaluate(word[pos + 1:])
            solved[i] = post.inverse() * tracked[i] * pre.inverse()
            remaining.discard(i)
            progressed = True
        if not progressed:
            raise PrecisionError("cyclic dependencies between loop corridors")
    return solved


def monodromy_group(f, precision=DEFAULT_BITS, max_retries=3):
    """Loop generators of the cover, one per finite branch point plus infinity.

    Every generator's cycle type is checked against the exact local data, and
    the ordered product of all generators (infinity last) must be the
    identity.
    """
    attempt_bits = precision
    last_error = None
    for _ in range(max_retries + 1):
        try:
            with mpmath.workprec(attempt_bits + 16):
                return _monodromy_attempt(f, attempt_bits)
        except PrecisionError as exc:
            last_error = exc
            attempt_bits *= 2
    raise PrecisionError(f"monodromy failed after retries: {last_error}")


def _monodromy_attempt(f, precision):
    n = f.pole_order()
    branch = critical_values(f, precision)
    big = max(abs(bp.value) for bp in branch)
    base = Fraction(int(mpmath.ceil(big)) + 2)
    sheets = None
    for _ in range(6):
        sheets = _initial_fiber(f, base, precision)
        if sheets is not None and len(sheets) == n:
            break
        base += 1
        sheets = None
    if sheets is None:
        raise PrecisionError("could not find a regular base fiber")
    base_c = mpmath.mpc(base.numerator) / base.denominator
    # each loop circle must keep the base well outside, not just clear of the
    # other branch values, or the loop would wind around the base point
    radii = []
    for i, bp in enumerate(branch):
        r = abs(base_c - bp.value) / 3
        for j, other in enumerate(branch):
            if i != j:
                r = min(r, abs(bp.value - other.value) / 2)
        radii.append(r)
    tol = mpmath.mpf(2) ** (-(precision // 2))
    tracker = _Tracker(f, tol)
    crit_pts = [bp.value for bp in branch]
    raw_gens = []
    words = []
    for i, bp in enumerate(branch):
        center, radius = bp.value, radii[i]
        entry = center + radius * _unit(base_c - center)
        obstacles = [(other.value, radii[j] / 2) for j, other in enumerate(branch) if j != i]
        spoke = _segment_nodes(base_c, entry, obstacles)
        circle = _circle_nodes(center, radius, mpmath.arg(entry - center))
        path = spoke + circle[1:] + list(reversed(spoke))[1:]
        final = tracker.track_waypoints(path, sheets)
        perm = _match_permutation(sheets, final)
        if perm.cycle_type() != bp.multiplicities:
            raise PrecisionError(
                f"loop cycle type {perm.cycle_type()} != local profile {bp.multiplicities}"
            )
        raw_gens.append(perm)
        words.append(_reduce_word(_slit_word(path, crit_pts)))
    loop = _circle_nodes(mpmath.mpc(0), abs(base_c), mpmath.arg(base_c))
    final = tracker.track_waypoints(loop, sheets)
    around_all = _match_permutation(sheets, final)
    infinity_generator = around_all.inverse()
    if infinity_generator.cycle_type() != (n,):
        raise PrecisionError(
            f"infinity loop has cycle type {infinity_generator.cycle_type()}, expected ({n},)"
        )
    around_word = _reduce_word(_slit_word(loop, crit_pts))
    if (sorted(j for j, _s in around_word) != list(range(len(branch)))
            or any(s != 1 for _j, s in around_word)):
        raise PrecisionError("loop around infinity has a malformed crossing word")
    canonical = _solve_slit_generators(words, raw_gens, n)
    order = [j for j, _s in around_word]
    branch = [branch[j] for j in order]
    generators = [canonical[j] for j in order]
    ordered_product = Perm.identity(n)
    for g in generators:
        ordered_product = g * ordered_product
    if ordered_product != around_all:
        raise PrecisionError("finite loops do not compose to the loop around infinity")
    product = infinity_generator * ordered_product
    if not product.is_identity:
        raise PrecisionError("generator product is not the identity")
    return MonodromyResult(
        degree=n,
        base=base,
        sheets=sheets,
        branch_points=branch,
        generators=generators,
        infinity_generator=infinity_generator,
    )


def extract_transposition(result, branch_index):
    """The odd-lcm power of a loop generator, when its profile allows one.

    Needs exactly one cycle of length 2 and odd lengths otherwise; returns
    None ("not applicable") for any other profile.
    """
    gen = result.generators[branch_index]
    bp = result.branch_points[branch_index]
    if gen.cycle_type() != bp.multiplicities:
        raise AssertionError("generator does not match its branch point")
    extracted = transposition_power(gen)
    if extracted is None:
        return None
    c, perm = extracted
    return perm
