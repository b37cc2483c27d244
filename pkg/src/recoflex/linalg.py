"""Exact dense vector/matrix helpers on tuples of rationals.

Vectors are tuples of Rat, matrices tuples of row tuples.  Everything is
immutable and hashable so problems and polyhedra can be cached.
"""

from __future__ import annotations

from math import gcd

from .rational import Rat, ZERO

Vec = tuple
Mat = tuple


def vec(xs) -> Vec:
    return tuple(Rat(x) for x in xs)


def mat(rows) -> Mat:
    m = tuple(tuple(Rat(x) for x in row) for row in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise ValueError("ragged matrix")
    return m


def zeros(n) -> Vec:
    return (ZERO,) * n


def unit(n, i) -> Vec:
    return tuple(Rat(1 if j == i else 0) for j in range(n))


def dot(a: Vec, b: Vec):
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
    return sum((x * y for x, y in zip(a, b)), ZERO)


def vadd(a: Vec, b: Vec) -> Vec:
    if len(a) != len(b):
        raise ValueError("dimension mismatch")
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Vec, b: Vec) -> Vec:
    if len(a) != len(b):
        raise ValueError("dimension mismatch")
    return tuple(x - y for x, y in zip(a, b))


def vscale(lam, a: Vec) -> Vec:
    lam = Rat(lam)
    return tuple(lam * x for x in a)


def mat_vec(m: Mat, x: Vec) -> Vec:
    return tuple(dot(row, x) for row in m)


def mat_cols(m: Mat) -> Mat:
    return tuple(zip(*m)) if m else ()


def is_zero_vec(a: Vec) -> bool:
    return all(x == 0 for x in a)


def primitive(a: Vec) -> Vec:
    """Scale by a positive rational so entries are coprime integers.

    Orientation is preserved (rays keep their direction).
    """
    if is_zero_vec(a):
        return a
    denom_lcm = 1
    for x in a:
        d = int(Rat(x).denominator)
        denom_lcm = denom_lcm * d // gcd(denom_lcm, d)
    ints = [int(Rat(x).numerator) * (denom_lcm // int(Rat(x).denominator)) for x in a]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    return tuple(Rat(v // g) for v in ints)


def gauss_solve(m: Mat, rhs: Vec):
    """Solve the square system m·s = rhs exactly.

    Returns the solution vector, or None when the matrix is singular.
    """
    n = len(m)
    if any(len(row) != n for row in m) or len(rhs) != n:
        raise ValueError("gauss_solve needs a square system")
    a = [list(row) + [rhs[i]] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(a[r][n] for r in range(n))


def row_space_basis_indices(rows) -> list:
    """Indices of a greedy (lowest-index-first) maximal independent subset."""
    if not rows:
        return []
    width = len(rows[0])
    echelon = []  # reduced rows with leading-column bookkeeping
    chosen = []
    for idx, row in enumerate(rows):
        r = list(row)
        for lead, erow in echelon:
            if r[lead] != 0:
                f = r[lead]
                r = [x - f * y for x, y in zip(r, erow)]
        leadcol = next((j for j in range(width) if r[j] != 0), None)
        if leadcol is None:
            continue
        inv = 1 / r[leadcol]
        r = [x * inv for x in r]
        echelon.append((leadcol, r))
        chosen.append(idx)
    return chosen


def rank(rows) -> int:
    return len(row_space_basis_indices(rows))


def rref(rows):
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    a = [list(r) for r in rows]
    if not a:
        return (), ()
    width = len(a[0])
    pivots = []
    r = 0
    for col in range(width):
        piv = next((i for i in range(r, len(a)) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][col]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == len(a):
            break
    reduced = tuple(tuple(row) for row in a[:r])
    return reduced, tuple(pivots)


def kernel_basis(rows, width):
    """Canonical basis of {x : row·x = 0 for all rows} via RREF."""
    reduced, pivots = rref(rows)
    pivot_set = set(pivots)
    free = [j for j in range(width) if j not in pivot_set]
    basis = []
    for f in free:
        v = [ZERO] * width
        v[f] = Rat(1)
        for i, p in enumerate(pivots):
            v[p] = -reduced[i][f]
        basis.append(tuple(v))
    return basis
