"""Permutations of {0..n-1} and the small-degree group machinery.

Covers the fixed-space dimension of a set of permutation matrices, block
decompositions induced by the transpositions a group contains, the scan over
transitive subgroups generated together with a transposition, parity
certificates for alternating groups, and sign characters on (Z/2)^r.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import factorial, lcm, prod

from .linalg import rank


class Perm:
    """Bijection of {0..n-1} stored as its image tuple.

    Composition is (p * q)(i) = p(q(i)), so the right factor acts first.
    """

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation of 0..{len(images) - 1}: {images}")
        self.images = images

    @classmethod
    def identity(cls, n):
        return cls(range(n))

    @classmethod
    def transposition(cls, n, i, j):
        images = list(range(n))
        images[i], images[j] = j, i
        return cls(images)

    @classmethod
    def from_cycles(cls, n, *cycles):
        images = list(range(n))
        for cycle in cycles:
            for a, b in zip(cycle, cycle[1:] + tuple(cycle[:1])):
                images[a] = b
        return cls(images)

    @property
    def degree(self):
        return len(self.images)

    def __call__(self, i):
        return self.images[i]

    def __mul__(self, other):
        if not isinstance(other, Perm) or other.degree != self.degree:
            return NotImplemented
        return Perm(self.images[x] for x in other.images)

    def inverse(self):
        images = [0] * self.degree
        for i, x in enumerate(self.images):
            images[x] = i
        return Perm(images)

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = Perm.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base, k = base * base, k >> 1
        return result

    def cycles(self, include_fixed=False):
        """Cycles as tuples starting at their minimum, sorted by that minimum."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cycle = [start]
            seen[start] = True
            x = self.images[start]
            while x != start:
                cycle.append(x)
                seen[x] = True
                x = self.images[x]
            if len(cycle) > 1 or include_fixed:
                out.append(tuple(cycle))
        return out

    def cycle_type(self):
        """Partition of the degree: all cycle lengths, descending."""
        return tuple(sorted((len(c) for c in self.cycles(include_fixed=True)), reverse=True))

    @property
    def sign(self):
        return -1 if sum(len(c) - 1 for c in self.cycles()) % 2 else 1

    def order(self):
        return lcm(*(len(c) for c in self.cycles(include_fixed=True)))

    @property
    def is_identity(self):
        return all(x == i for i, x in enumerate(self.images))

    def moved_points(self):
        return [i for i, x in enumerate(self.images) if x != i]

    def __eq__(self, other):
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        cyc = self.cycles()
        if not cyc:
            return "Perm(id)"
        return "Perm(" + "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) + ")"


class PermGroup:
    """Group generated by a list of permutations, fully enumerated."""

    def __init__(self, generators, degree=None, max_order=1000000):
        generators = list(generators)
        if degree is None:
            if not generators:
                raise ValueError("need a degree or at least one generator")
            degree = generators[0].degree
        if any(g.degree != degree for g in generators):
            raise ValueError("generators act on different point counts")
        self.degree = degree
        self.generators = generators
        self._elements = self._close(max_order)

    def _close(self, max_order):
        identity = Perm.identity(self.degree)
        seen = {identity}
        queue = [identity]
        while queue:
            x = queue.pop()
            for g in self.generators:
                y = x * g
                if y not in seen:
                    if len(seen) >= max_order:
                        raise ValueError(f"group order exceeds {max_order}")
                    seen.add(y)
                    queue.append(y)
        return frozenset(seen)

    @property
    def order(self):
        return len(self._elements)

    def __iter__(self):
        return iter(self._elements)

    def __contains__(self, perm):
        return perm in self._elements

    def orbits(self):
        uf = _UnionFind(self.degree)
        for g in self.generators:
            for i, x in enumerate(g.images):
                uf.union(i, x)
        return uf.classes()

    def is_transitive(self):
        return len(self.orbits()) == 1

    def even_subgroup(self):
        """The subgroup of even elements (index 1 or 2)."""
        evens = [g for g in self._elements if g.sign == 1]
        return PermGroup(evens, degree=self.degree)

    def transpositions(self):
        return [g for g in self._elements if g.cycle_type().count(2) == 1
                and g.cycle_type().count(1) == self.degree - 2]

    def conjugate(self, s):
        si = s.inverse()
        return PermGroup([s * g * si for g in self.generators], degree=self.degree)


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb

    def classes(self):
        groups = {}
        for i in range(len(self.parent)):
            groups.setdefault(self.find(i), []).append(i)
        return sorted(groups.values())


def fixed_space_dimension(degree, perms):
    """Dimension of the common fixed space of permutation matrices.

    Computed twice: as the orbit count of the generated group and as the
    nullity of the stacked constraint rows v_i = v_{g(i)}. The two must agree;
    the shared value is returned.
    """
    if isinstance(perms, (Perm, PermGroup)):
        perms = perms.generators if isinstance(perms, PermGroup) else [perms]
    perms = list(perms)
    uf = _UnionFind(degree)
    rows = []
    for g in perms:
        if g.degree != degree:
            raise ValueError("degree mismatch")
        for i, x in enumerate(g.images):
            uf.union(i, x)
            if x != i:
                row = [Fraction(0)] * degree
                row[i] = Fraction(1)
                row[x] = Fraction(-1)
                rows.append(row)
    orbit_count = len(uf.classes())
    nullity = degree - (rank(rows) if rows else 0)
    if orbit_count != nullity:
        raise AssertionError(f"orbit count {orbit_count} != nullity {nullity}")
    return orbit_count


# --- block decompositions from contained transpositions ---


def transposition_blocks(group):
    """Classes of x ~ y iff x = y or the transposition (x y) lies in the group."""
    uf = _UnionFind(group.degree)
    for t in group.transpositions():
        i, j = t.moved_points()
        uf.union(i, j)
    return uf.classes()


@dataclass
class BlockStructure:
    blocks: list
    block_size: int
    transposition_subgroup_order: int
    quotient: PermGroup
    quotient_transitive: bool


def block_structure(group):
    """Structure forced on a transitive group by its transpositions.

    The ~ classes are blocks of equal size m, the transpositions generate the
    full product of symmetric groups on the blocks (order (m!)^k), and the
    induced action on the blocks is transitive. All three facts are verified.
    """
    blocks = transposition_blocks(group)
    sizes = {len(b) for b in blocks}
    if len(sizes) != 1:
        raise AssertionError(f"blocks of unequal sizes {sorted(sizes)}")
    m = sizes.pop()
    trans = group.transpositions()
    m_order = PermGroup(trans, degree=group.degree).order if trans else 1
    if m_order != factorial(m) ** len(blocks):
        raise AssertionError("transpositions do not generate the block product")
    index_of = {}
    for bi, block in enumerate(blocks):
        for x in block:
            index_of[x] = bi
    quotient_gens = []
    for g in group.generators:
        images = [0] * len(blocks)
        for bi, block in enumerate(blocks):
            targets = {index_of[g(x)] for x in block}
            if len(targets) != 1:
                raise AssertionError("group does not preserve the block partition")
            images[bi] = targets.pop()
        quotient_gens.append(Perm(images))
    quotient = PermGroup(quotient_gens, degree=len(blocks))
    return BlockStructure(blocks, m, m_order, quotient, quotient.is_transitive())


# --- scan over transitive subgroups containing a transposition ---


class _SmallSymmetric:
    """Full multiplication table of S_n for small n."""

    def __init__(self, n):
        self.n = n
        self.elements = list(permutations(range(n)))
        self.index = {p: i for i, p in enumerate(self.elements)}
        size = len(self.elements)
        self.mul = []
        for p in self.elements:
            row = [0] * size
            for j, q in enumerate(self.elements):
                row[j] = self.index[tuple(p[x] for x in q)]
            self.mul.append(row)
        self.inv = [0] * size
        for i, p in enumerate(self.elements):
            images = [0] * n
            for a, b in enumerate(p):
                images[b] = a
            self.inv[i] = self.index[tuple(images)]

    def closure(self, gen_ids):
        identity = self.index[tuple(range(self.n))]
        seen = {identity}
        queue = [identity]
        mul = self.mul
        while queue:
            x = queue.pop()
            row = mul[x]
            for g in gen_ids:
                y = row[g]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return frozenset(seen)

    def double_coset_reps(self, subgroup_ids):
        size = len(self.elements)
        mul = self.mul
        seen = bytearray(size)
        reps = []
        members = list(subgroup_ids)
        for g in range(size):
            if seen[g]:
                continue
            reps.append(g)
            for a in members:
                row = mul[mul[a][g]]
                for b in members:
                    seen[row[b]] = 1
        return reps

    def conjugacy_key(self, subgroup_ids):
        mul, inv = self.mul, self.inv
        members = list(subgroup_ids)
        best = None
        for s in range(len(self.elements)):
            si = inv[s]
            row = mul[s]
            key = tuple(sorted(mul[row[g]][si] for g in members))
            if best is None or key < best:
                best = key
        return best


@dataclass
class TransitiveClass:
    """One conjugacy class found by the scan."""

    representative: PermGroup
    order: int
    scanned_conjugates: int
    structure: BlockStructure
    is_symmetric: bool


def transitive_subgroup_scan(n):
    """Conjugacy classes of transitive subgroups of S_n containing a transposition.

    Walks the subgroup lattice above one fixed transposition; double coset
    representatives are enough when extending because <H, h1 g h2> = <H, g>.
    Every class is reached since the transpositions form a single conjugacy
    class. Each class representative is returned with its verified block
    structure, smallest blocks first.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    sym = _SmallSymmetric(n)
    base = list(range(n))
    base[0], base[1] = 1, 0
    t = sym.index[tuple(base)]
    start = sym.closure([t])
    found = {start: [t]}
    queue = [start]
    while queue:
        subgroup = queue.pop()
        gens = found[subgroup]
        for g in sym.double_coset_reps(subgroup):
            if g in subgroup:
                continue
            extended = sym.closure(gens + [g])
            if extended not in found:
                found[extended] = gens + [g]
                queue.append(extended)
    transitive = {}
    for subgroup in found:
        orbit = {sym.elements[h][0] for h in subgroup}
        if len(orbit) == n:
            transitive.setdefault(sym.conjugacy_key(subgroup), []).append(subgroup)
    classes = []
    for key, members in transitive.items():
        rep_ids = members[0]
        gens = [Perm(sym.elements[g]) for g in found[rep_ids]]
        group = PermGroup(gens, degree=n)
        if group.order != len(rep_ids):
            raise AssertionError("closure mismatch between tables and Perm arithmetic")
        classes.append(TransitiveClass(
            representative=group,
            order=len(rep_ids),
            scanned_conjugates=len(members),
            structure=block_structure(group),
            is_symmetric=len(rep_ids) == factorial(n),
        ))
    classes.sort(key=lambda c: (c.structure.block_size, c.order))
    return classes


# --- alternating group certificates ---


def _partitions(n, largest=None):
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def conjugacy_class_size(n, partition):
    """Number of permutations in S_n with the given cycle type."""
    counts = {}
    for part in partition:
        counts[part] = counts.get(part, 0) + 1
    denom = prod(l**m * factorial(m) for l, m in counts.items())
    return factorial(n) // denom


def alternating_min_cycle_count(n):
    """Minimum cycle count over non-identity even permutations, exhaustively.

    Scans cycle types rather than elements; the certificate that nothing was
    missed is that the class sizes of the even types sum to n!/2. Returns
    (minimum, census dict); the minimum is None when A_n is trivial.
    """
    census = {}
    total = 0
    best = None
    for partition in _partitions(n):
        if (n - len(partition)) % 2:
            continue
        size = conjugacy_class_size(n, partition)
        census[partition] = size
        total += size
        if len(partition) < n:
            best = len(partition) if best is None else min(best, len(partition))
    expected = factorial(n) // 2 if n >= 2 else 1
    if total != expected:
        raise AssertionError(f"even class sizes sum to {total}, expected {expected}")
    return best, census


# --- transposition extraction from a single permutation ---


def transposition_power(perm):
    """(c, perm^c) with perm^c a transposition, when the cycle type allows it.

    Works exactly when the cycle type has one cycle of length 2 and all other
    lengths odd; c is then the lcm of the odd lengths. Returns None otherwise.
    """
    lengths = perm.cycle_type()
    evens = [l for l in lengths if l % 2 == 0]
    if evens != [2]:
        return None
    odds = [l for l in lengths if l % 2 == 1]
    c = lcm(*odds) if odds else 1
    power = perm**c
    if power.cycle_type().count(2) != 1 or len(power.moved_points()) != 2:
        raise AssertionError("extracted power is not a transposition")
    return c, power


# --- sign characters on (Z/2)^r ---


@dataclass(frozen=True)
class SignCharacter:
    """Character of (Z/2)^r sending a sign vector to the product over a subset."""

    r: int
    subset: frozenset

    def __call__(self, signs):
        if len(signs) != self.r:
            raise ValueError(f"expected {self.r} signs")
        if any(s not in (1, -1) for s in signs):
            raise ValueError("signs must be +-1")
        return prod(signs[i] for i in self.subset) if self.subset else 1

    @property
    def is_odd(self):
        """Odd characters send the global flip (-1, ..., -1) to -1."""
        return len(self.subset) % 2 == 1

    def witness(self):
        """A sign vector outside the kernel, proving the character nontrivial."""
        if not self.subset:
            raise ValueError("the trivial character is surjective onto {1} only")
        j = min(self.subset)
        return tuple(-1 if i == j else 1 for i in range(self.r))


def odd_sign_characters(r):
    """All 2^(r-1) characters that are -1 on the global sign flip."""
    if r < 1:
        raise ValueError("need r >= 1")
    out = []
    for mask in range(2**r):
        subset = frozenset(i for i in range(r) if mask >> i & 1)
        if len(subset) % 2 == 1:
            out.append(SignCharacter(r, subset))
    return out
