"""Exact linear algebra over Q, just enough for the library.

Matrices are lists of lists of Fractions. Dimensions here are tiny (a few
dozen at most), so plain fraction Gaussian elimination is the right tool.
"""

from fractions import Fraction


def _clone(matrix):
    return [[Fraction(v) for v in row] for row in matrix]


def rref(matrix):
    """Reduced row echelon form; returns (rref matrix, pivot column list)."""
    m = _clone(matrix)
    if not m:
        return m, []
    rows, cols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(matrix):
    return len(rref(matrix)[1])


def nullspace(matrix):
    """Basis of the right kernel, as a list of Fraction vectors."""
    if not matrix:
        return []
    reduced, pivots = rref(matrix)
    cols = len(matrix[0])
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * cols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -reduced[r][fc]
        basis.append(vec)
    return basis


def det(matrix):
    """Exact determinant by fraction Gaussian elimination."""
    m = _clone(matrix)
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant needs a square matrix")
    sign = 1
    acc = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            sign = -sign
        acc *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return sign * acc


def solve(matrix, rhs):
    """One exact solution of M x = rhs, or None if inconsistent."""
    if not matrix:
        return [] if not any(rhs) else None
    cols = len(matrix[0])
    augmented = [list(row) + [r] for row, r in zip(matrix, rhs)]
    reduced, pivots = rref(augmented)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for r, pc in enumerate(pivots):
        x[pc] = reduced[r][-1]
    return x
