"""Exact convex polyhedron calculus in dual representation.

Polyhedra are kept in canonical dual form: an irredundant generator
representation (lex-sorted extreme vertices, primitively scaled extreme
rays) paired with an irredundant inequality representation (canonical
equality rows from the affine hull in RREF form, facet rows primitively
scaled and lex-sorted).  Canonicalization on every constructor makes
structural equality coincide with set equality.

Conversions run by double description on the homogenization (H -> V) and
on the polar cone of a full-dimensional coordinate reduction (V -> H).
Polyhedra with nontrivial lineality space are rejected: no object handled
by this package has one (all upper sets have pointed recession cones and
feasible regions live in the nonnegative orthant).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .linalg import (
    Vec,
    dot,
    gauss_solve,
    is_zero_vec,
    kernel_basis,
    primitive,
    row_space_basis_indices,
    rref,
    unit,
    vadd,
    vscale,
    vsub,
    zeros,
)
from .rational import Rat, ZERO
from .simplex import EQ, GE, LE, OPTIMAL, LpProblem, solve_lp


class LinealityError(ValueError):
    """The set contains a line; unsupported by design."""


class EmptySetError(ValueError):
    pass


MAX_GENERATORS = 200_000


@dataclass(frozen=True)
class VRep:
    dim: int
    vertices: tuple
    rays: tuple


@dataclass(frozen=True)
class HRep:
    dim: int
    ineqs: tuple  # ((coeffs, rhs), ...) meaning coeffs . x >= rhs
    eqs: tuple  # ((coeffs, rhs), ...) meaning coeffs . x == rhs


def _check_dim(points, dim):
    for p in points:
        if len(p) != dim:
            raise ValueError(f"generator of length {len(p)}, expected {dim}")


# ---------------------------------------------------------------------------
# Double description on pointed cones


def _cone_generators(rows, dim):
    """Minimal generators of {x : row . x >= 0 for all rows}.

    Requires a pointed cone (rank of rows == dim); raises LinealityError
    otherwise.  Rows are inserted incrementally with the combinatorial
    adjacency test; generators are kept primitively scaled.
    """
    base_idx = row_space_basis_indices(rows)
    if len(base_idx) < dim:
        raise LinealityError("cone is not pointed (lineality unsupported)")
    base = [rows[i] for i in base_idx]
    gens = []
    for i in range(dim):
        col = gauss_solve(tuple(base), unit(dim, i))
        gens.append(primitive(col))

    def zeroset(g, processed):
        z = 0
        for bit, ridx in enumerate(processed):
            if dot(rows[ridx], g) == 0:
                z |= 1 << bit
        return z

    processed = list(base_idx)
    zsets = [zeroset(g, processed) for g in gens]
    for ridx, row in enumerate(rows):
        if ridx in base_idx:
            continue
        vals = [dot(row, g) for g in gens]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zer = [i for i, v in enumerate(vals) if v == 0]
        if not neg:
            processed.append(ridx)
            bit = 1 << (len(processed) - 1)
            zsets = [
                zsets[i] | (bit if vals[i] == 0 else 0) for i in range(len(gens))
            ]
            continue
        new_gens = []
        new_zsets = []
        for i in pos + zer:
            new_gens.append(gens[i])
            new_zsets.append(zsets[i])
        seen = {g: None for g in new_gens}
        for p in pos:
            for q in neg:
                meet = zsets[p] & zsets[q]
                adjacent = True
                for k in range(len(gens)):
                    if k != p and k != q and (meet & zsets[k]) == meet:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                comb = primitive(
                    tuple(
                        vals[p] * gens[q][j] - vals[q] * gens[p][j]
                        for j in range(dim)
                    )
                )
                if comb in seen:
                    continue
                seen[comb] = None
                new_gens.append(comb)
                new_zsets.append((zsets[p] & zsets[q]))
        processed.append(ridx)
        bit = 1 << (len(processed) - 1)
        gens = new_gens
        zsets = [
            new_zsets[i]
            | (bit if dot(row, new_gens[i]) == 0 else 0)
            for i in range(len(new_gens))
        ]
        if len(gens) > MAX_GENERATORS:
            raise RuntimeError("double description generator blow-up")
    return gens


def _h_to_generators(hrep: HRep):
    """Vertices and rays of an H-rep via DD on the homogenization.

    Returns (vertices, rays); ([], []) signals the empty set.
    """
    n = hrep.dim
    rows = []
    for coeffs, rhs in hrep.ineqs:
        rows.append(tuple(coeffs) + (-Rat(rhs),))
    for coeffs, rhs in hrep.eqs:
        rows.append(tuple(coeffs) + (-Rat(rhs),))
        rows.append(tuple(-c for c in coeffs) + (Rat(rhs),))
    rows.append(zeros(n) + (Rat(1),))
    gens = _cone_generators(tuple(rows), n + 1)
    vertices = []
    rays = []
    for g in gens:
        t = g[-1]
        if t > 0:
            vertices.append(tuple(x / t for x in g[:-1]))
        elif not is_zero_vec(g[:-1]):
            rays.append(primitive(g[:-1]))
    if not vertices:
        return [], []
    return vertices, rays


def _affine_basis(vertices, rays):
    """Greedy basis of the direction space of conv(V)+cone(R)."""
    dirs = [vsub(v, vertices[0]) for v in vertices[1:]] + list(rays)
    dirs = [d for d in dirs if not is_zero_vec(d)]
    idx = row_space_basis_indices(dirs)
    return [dirs[i] for i in idx]


def _v_to_hrep(vertices, rays, dim) -> HRep:
    """Irredundant H-rep of conv(vertices) + cone(rays)."""
    if not vertices:
        raise EmptySetError("generator representation without vertices")
    v0 = vertices[0]
    basis = _affine_basis(vertices, rays)
    s = len(basis)

    eq_rows = []
    for c in kernel_basis(basis, dim):
        eq_rows.append(tuple(c) + (dot(c, v0),))
    eq_canon, _ = rref(eq_rows)
    eqs = []
    for row in eq_canon:
        p = primitive(row)
        eqs.append((p[:-1], p[-1]))

    if s == 0:
        return HRep(dim, (), tuple(eqs))

    # Coordinates on the affine hull: x' = Binv (x_J - v0_J) for s
    # independent rows J of the basis matrix (columns = basis dirs).
    bmat_rows = [tuple(b[i] for b in basis) for i in range(dim)]
    jrows = row_space_basis_indices(bmat_rows)
    bj = tuple(bmat_rows[i] for i in jrows)

    def reduce_point(x):
        rhs = tuple(x[i] - v0[i] for i in jrows)
        sol = gauss_solve(bj, rhs)
        assert sol is not None
        return sol

    def reduce_dir(r):
        rhs = tuple(r[i] for i in jrows)
        sol = gauss_solve(bj, rhs)
        assert sol is not None
        return sol

    red_vs = [reduce_point(v) for v in vertices]
    red_rs = [reduce_dir(r) for r in rays]

    polar_rows = [tuple(v) + (Rat(-1),) for v in red_vs]
    polar_rows += [tuple(r) + (ZERO,) for r in red_rs]
    gens = _cone_generators(tuple(polar_rows), s + 1)

    # Map each facet w . x' >= gamma back to ambient coordinates.
    binv_cols = [gauss_solve(bj, unit(s, i)) for i in range(s)]
    ineqs = []
    for g in gens:
        w, gamma = g[:-1], g[-1]
        if is_zero_vec(w):
            continue
        # a_J = w^T Binv, zero elsewhere
        aj = [
            sum((w[r] * binv_cols[c][r] for r in range(s)), ZERO)
            for c in range(s)
        ]
        a = [ZERO] * dim
        for pos, i in enumerate(jrows):
            a[i] = aj[pos]
        beta = gamma + sum((aj[pos] * v0[i] for pos, i in enumerate(jrows)), ZERO)
        row = primitive(tuple(a) + (beta,))
        ineqs.append((row[:-1], row[-1]))
    ineqs = sorted(set(ineqs))
    return HRep(dim, tuple(ineqs), tuple(eqs))


# ---------------------------------------------------------------------------
# Canonical polyhedron


@dataclass(frozen=True, eq=False)
class Polyhedron:
    dim: int
    is_empty: bool
    vrep: Optional[VRep]
    hrep: Optional[HRep]

    # Canonical construction makes structural equality set equality;
    # defined manually so UpperSet instances compare equal to plain
    # polyhedra describing the same set.
    def __eq__(self, other):
        if not isinstance(other, Polyhedron):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.is_empty == other.is_empty
            and self.vrep == other.vrep
            and self.hrep == other.hrep
        )

    def __hash__(self):
        return hash((self.dim, self.is_empty, self.vrep, self.hrep))

    @staticmethod
    def empty(dim) -> "Polyhedron":
        return Polyhedron(dim, True, None, None)

    @staticmethod
    def from_generators(vertices, rays=(), reduce=True) -> "Polyhedron":
        vertices = [tuple(Rat(x) for x in v) for v in vertices]
        rays = [tuple(Rat(x) for x in r) for r in rays]
        if not vertices:
            raise EmptySetError("at least one vertex generator required")
        dim = len(vertices[0])
        _check_dim(vertices, dim)
        _check_dim(rays, dim)
        rays = [primitive(r) for r in rays if not is_zero_vec(r)]
        vertices = sorted(set(vertices))
        rays = sorted(set(rays))
        if reduce:
            rays = _extreme_rays(rays, dim)
            vertices = _extreme_points(vertices, rays, dim)
        hrep = _v_to_hrep(vertices, rays, dim)
        vrep = VRep(dim, tuple(vertices), tuple(rays))
        return Polyhedron(dim, False, vrep, hrep)

    @staticmethod
    def from_inequalities(ineqs, eqs=(), dim=None) -> "Polyhedron":
        ineqs = tuple(
            (tuple(Rat(c) for c in coeffs), Rat(rhs)) for coeffs, rhs in ineqs
        )
        eqs = tuple(
            (tuple(Rat(c) for c in coeffs), Rat(rhs)) for coeffs, rhs in eqs
        )
        if dim is None:
            if not ineqs and not eqs:
                raise ValueError("dimension required for empty row list")
            dim = len((ineqs + eqs)[0][0])
        for coeffs, _ in ineqs + eqs:
            if len(coeffs) != dim:
                raise ValueError("row width mismatch")
        raw = HRep(dim, ineqs, eqs)
        vertices, rays = _h_to_generators(raw)
        if not vertices:
            return Polyhedron.empty(dim)
        vertices = sorted(set(vertices))
        rays = sorted(set(rays))
        hrep = _v_to_hrep(vertices, rays, dim)
        return Polyhedron(dim, False, VRep(dim, tuple(vertices), tuple(rays)), hrep)

    # -- basic queries ----------------------------------------------------

    @property
    def vertices(self):
        return self.vrep.vertices if self.vrep else ()

    @property
    def rays(self):
        return self.vrep.rays if self.vrep else ()

    def contains_point(self, x) -> bool:
        x = tuple(Rat(v) for v in x)
        if len(x) != self.dim:
            raise ValueError("dimension mismatch")
        if self.is_empty:
            return False
        return all(dot(a, x) >= b for a, b in self.hrep.ineqs) and all(
            dot(a, x) == b for a, b in self.hrep.eqs
        )

    def recession_contains(self, r) -> bool:
        r = tuple(Rat(v) for v in r)
        if len(r) != self.dim:
            raise ValueError("dimension mismatch")
        if self.is_empty:
            return False
        return all(dot(a, r) >= 0 for a, _ in self.hrep.ineqs) and all(
            dot(a, r) == 0 for a, _ in self.hrep.eqs
        )

    def contains_set(self, inner: "Polyhedron") -> bool:
        if inner.dim != self.dim:
            raise ValueError("dimension mismatch")
        if inner.is_empty:
            return True
        if self.is_empty:
            return False
        return all(self.contains_point(v) for v in inner.vertices) and all(
            self.recession_contains(r) for r in inner.rays
        )

    def set_equals(self, other: "Polyhedron") -> bool:
        return self == other  # canonical forms make this set equality

    def translate(self, c) -> "Polyhedron":
        c = tuple(Rat(v) for v in c)
        if self.is_empty:
            return self
        verts = tuple(vadd(v, c) for v in self.vertices)
        ineqs = _canon_rows((a, b + dot(a, c)) for a, b in self.hrep.ineqs)
        eqs = tuple(
            _canon_row(a, b + dot(a, c)) for a, b in self.hrep.eqs
        )
        return Polyhedron(
            self.dim,
            False,
            VRep(self.dim, verts, self.rays),
            HRep(self.dim, ineqs, eqs),
        )


def _canon_row(coeffs, rhs):
    p = primitive(tuple(coeffs) + (Rat(rhs),))
    return (p[:-1], p[-1])


def _canon_rows(rows):
    return tuple(sorted(_canon_row(a, b) for a, b in rows))


def _extreme_rays(rays, dim):
    """Greedy removal of rays generated by the others (exact LPs)."""
    rays = list(rays)
    changed = True
    while changed:
        changed = False
        for i, r in enumerate(rays):
            others = rays[:i] + rays[i + 1 :]
            if not others:
                continue
            if _in_cone(r, others, dim):
                rays.pop(i)
                changed = True
                break
    return rays


def _in_cone(r, gens, dim) -> bool:
    rows = []
    for i in range(dim):
        rows.append((tuple(g[i] for g in gens), EQ, r[i]))
    p = LpProblem.create(zeros(len(gens)), rows, lower=[0] * len(gens))
    return solve_lp(p).status == OPTIMAL


def _extreme_points(vertices, rays, dim):
    vertices = list(vertices)
    changed = True
    while changed:
        changed = False
        for i, v in enumerate(vertices):
            others = vertices[:i] + vertices[i + 1 :]
            if not others:
                continue
            k, m = len(others), len(rays)
            rows = [
                (
                    tuple(o[j] for o in others) + tuple(r[j] for r in rays),
                    EQ,
                    v[j],
                )
                for j in range(dim)
            ]
            rows.append(((Rat(1),) * k + (ZERO,) * m, EQ, Rat(1)))
            p = LpProblem.create(zeros(k + m), rows, lower=[0] * (k + m))
            if solve_lp(p).status == OPTIMAL:
                vertices.pop(i)
                changed = True
                break
    return vertices


# ---------------------------------------------------------------------------
# Operations of the calculus


def minkowski_sum(a: Polyhedron, b: Polyhedron) -> Polyhedron:
    """Exact Minkowski sum; generators are pairwise sums reduced to
    extreme ones."""
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    if a.is_empty or b.is_empty:
        return Polyhedron.empty(a.dim)
    verts = {vadd(u, v) for u in a.vertices for v in b.vertices}
    rays = set(a.rays) | set(b.rays)
    return Polyhedron.from_generators(sorted(verts), sorted(rays))


def scale(a: Polyhedron, lam) -> Polyhedron:
    lam = Rat(lam)
    if lam <= 0:
        raise ValueError("scale factor must be positive")
    if a.is_empty:
        return a
    verts = tuple(vscale(lam, v) for v in a.vertices)
    ineqs = _canon_rows((c, lam * rhs) for c, rhs in a.hrep.ineqs)
    eqs = tuple(_canon_row(c, lam * rhs) for c, rhs in a.hrep.eqs)
    return Polyhedron(a.dim, False, VRep(a.dim, verts, a.rays), HRep(a.dim, ineqs, eqs))


def intersect(a: Polyhedron, b: Polyhedron) -> Polyhedron:
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    if a.is_empty or b.is_empty:
        return Polyhedron.empty(a.dim)
    return Polyhedron.from_inequalities(
        a.hrep.ineqs + b.hrep.ineqs, a.hrep.eqs + b.hrep.eqs, dim=a.dim
    )


def box(lo, hi) -> Polyhedron:
    lo = tuple(Rat(x) for x in lo)
    hi = tuple(Rat(x) for x in hi)
    dim = len(lo)
    ineqs = []
    for i in range(dim):
        ineqs.append((unit(dim, i), lo[i]))
        ineqs.append((vscale(-1, unit(dim, i)), -hi[i]))
    return Polyhedron.from_inequalities(ineqs, dim=dim)


def orthant(dim) -> Polyhedron:
    return Polyhedron.from_generators([zeros(dim)], [unit(dim, i) for i in range(dim)])


class UpperSet(Polyhedron):
    """Polyhedron closed under adding the nonnegative orthant."""

    @staticmethod
    def wrap(p: Polyhedron) -> "UpperSet":
        if not p.is_empty:
            for i in range(p.dim):
                if not p.recession_contains(unit(p.dim, i)):
                    raise ValueError(
                        "set is not closed under the nonnegative orthant"
                    )
        return UpperSet(p.dim, p.is_empty, p.vrep, p.hrep)

    @staticmethod
    def empty(dim) -> "UpperSet":
        return UpperSet(dim, True, None, None)


def hat(p: Polyhedron) -> UpperSet:
    """Closure A + R^d_+: adds unit rays, drops newly redundant
    generators."""
    if p.is_empty:
        raise EmptySetError("hat of the empty set is undefined")
    rays = sorted(set(p.rays) | {unit(p.dim, i) for i in range(p.dim)})
    return UpperSet.wrap(Polyhedron.from_generators(p.vertices, rays))


def hat_of_points(points, dim=None) -> UpperSet:
    points = [tuple(Rat(x) for x in v) for v in points]
    if not points:
        raise EmptySetError("hat of the empty set is undefined")
    dim = dim or len(points[0])
    return UpperSet.wrap(
        Polyhedron.from_generators(points, [unit(dim, i) for i in range(dim)])
    )


def recession_cone_is_orthant(p: Polyhedron) -> bool:
    """True iff the recession cone equals the nonnegative orthant exactly."""
    if p.is_empty:
        raise EmptySetError("infeasible problem")
    return set(p.rays) == {unit(p.dim, i) for i in range(p.dim)}


def poly_to_json(p: Polyhedron) -> dict:
    from .rational import format_rational as fr

    if p.is_empty:
        return {"empty": True, "dim": p.dim}
    return {
        "dim": p.dim,
        "vertices": [[fr(x) for x in v] for v in p.vertices],
        "rays": [[fr(x) for x in r] for r in p.rays],
        "hrep": {
            "A": [[fr(c) for c in coeffs] for coeffs, _ in p.hrep.ineqs],
            "b": [fr(rhs) for _, rhs in p.hrep.ineqs],
            "senses": [">=" for _ in p.hrep.ineqs],
            "A_eq": [[fr(c) for c in coeffs] for coeffs, _ in p.hrep.eqs],
            "b_eq": [fr(rhs) for _, rhs in p.hrep.eqs],
        },
    }
