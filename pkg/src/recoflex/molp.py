"""Bounded multi-objective linear programming over exact rationals.

The central object is the upper image: the set of attainable objective
vectors plus everything componentwise worse.  Two independent
constructions are provided:

* ``refine`` (default): outer-approximation refinement in outcome space.
  Starting from the ideal-point corner, untested vertices of the outer
  polyhedron are checked for attainability with a scalar LP; each failure
  yields an exact supporting cut from the LP duals.  All polyhedral work
  happens in the (low) outcome dimension, all LPs in decision space.
* ``lift``: double description on the lifted polyhedron
  {(z, v) : v >= Pz, z feasible} followed by projection onto outcome
  space.  Exponential in the decision dimension, fine for small systems;
  used to cross-check ``refine`` in the test suite.

Both construct identical canonical polyhedra (asserted in tests).
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import Mat, Vec, dot, mat_vec, unit, zeros
from .polyhedra import (
    HRep,
    Polyhedron,
    UpperSet,
    _h_to_generators,
    recession_cone_is_orthant,
    hat_of_points,
)
from .rational import Rat, ZERO
from .simplex import (
    EQ,
    GE,
    INFEASIBLE,
    LE,
    OPTIMAL,
    UNBOUNDED,
    LpProblem,
    solve_lp,
    solve_many,
)


class InfeasibleError(ValueError):
    """The feasible set is empty."""


class UnboundedError(ValueError):
    """Boundedness assumption violated; carries a violating direction."""

    def __init__(self, direction):
        super().__init__(f"objective unbounded along {direction}")
        self.direction = direction


@dataclass(frozen=True)
class Molp:
    objective: Mat  # d x q objective matrix, minimized componentwise
    rows: tuple
    lower: tuple
    upper: tuple

    @staticmethod
    def create(objective, rows, lower=None, upper=None) -> "Molp":
        obj = tuple(tuple(Rat(c) for c in row) for row in objective)
        if not obj:
            raise ValueError("objective matrix needs at least one row")
        q = len(obj[0])
        base = LpProblem.create(obj[0], rows, lower, upper)
        return Molp(obj, base.rows, base.lower, base.upper)

    @property
    def d(self):
        return len(self.objective)

    @property
    def q(self):
        return len(self.objective[0])

    def lp(self, objective, extra_rows=(), extra_vars=0):
        """Scalar LP over the feasible set, optionally with extra
        trailing variables (unbounded unless constrained)."""
        q = self.q
        rows = [
            (tuple(c) + zeros(extra_vars), s, r) for c, s, r in self.rows
        ]
        rows.extend(extra_rows)
        return LpProblem.create(
            objective,
            rows,
            lower=self.lower + (None,) * extra_vars,
            upper=self.upper + (None,) * extra_vars,
        )


@dataclass(frozen=True)
class UpperImage:
    poly: UpperSet
    witnesses: tuple  # ((vertex, z), ...) lex-ordered by vertex

    @property
    def vertices(self):
        return self.poly.vertices

    def witness(self, vertex):
        for v, z in self.witnesses:
            if v == vertex:
                return z
        raise KeyError(f"{vertex} is not a vertex of the upper image")


@dataclass(frozen=True)
class MolpSolution:
    entries: tuple  # ((z, value), ...) one per upper-image vertex

    def values(self):
        return tuple(v for _, v in self.entries)


def scalarize(m: Molp, weights) -> object:
    """min w^T P z over the feasible set; returns the LpResult."""
    w = tuple(Rat(x) for x in weights)
    cost = tuple(
        sum((w[j] * m.objective[j][i] for j in range(m.d)), ZERO)
        for i in range(m.q)
    )
    return solve_lp(m.lp(cost))


def _membership_lp(m: Molp, u: Vec):
    """min t s.t. Pz <= u + t*1, z feasible; t* <= 0 iff u in the image."""
    d, q = m.d, m.q
    extra = [
        (tuple(m.objective[j]) + (Rat(-1),), LE, u[j]) for j in range(d)
    ]
    objective = zeros(q) + (Rat(1),)
    return m.lp(objective, extra_rows=extra, extra_vars=1)


def _attainability_cut(m: Molp, u: Vec, check=True):
    """Test u for membership in the upper image.

    Returns ("in", z) with Pz <= u, or ("cut", w, gamma) with a valid
    inequality w.v >= gamma for the image violated by u.
    """
    res = solve_lp(_membership_lp(m, u))
    assert res.status == OPTIMAL, "membership LP is bounded for bounded images"
    if res.value <= 0:
        return ("in", res.x[: m.q])
    w = tuple(-y for y in res.row_duals[len(m.rows) :])
    assert all(x >= 0 for x in w) and sum(w) == 1
    gamma = dot(w, u) + res.value
    if check:
        cost = tuple(
            sum((w[j] * m.objective[j][i] for j in range(m.d)), ZERO)
            for i in range(m.q)
        )
        support = solve_lp(m.lp(cost))
        assert support.status == OPTIMAL and support.value == gamma
    return ("cut", w, gamma)


def upper_image(m: Molp, method: str = "refine", max_cuts: int = 10_000) -> UpperImage:
    """Exact dual-representation upper image with per-vertex witnesses.

    Raises InfeasibleError for an empty feasible set and UnboundedError
    (with a violating outcome direction) when some objective component
    is unbounded below.
    """
    base = m.lp(zeros(m.q))
    results = solve_many(base, [m.objective[j] for j in range(m.d)])
    if results[0].status == INFEASIBLE:
        raise InfeasibleError("feasible set is empty")
    ideal = []
    for r in results:
        if r.status == UNBOUNDED:
            raise UnboundedError(mat_vec(m.objective, r.ray))
        ideal.append(r.value)
    if method == "lift":
        poly, witnesses = _upper_image_lift(m)
    else:
        poly, witnesses = _upper_image_refine(m, tuple(ideal), max_cuts)
    assert recession_cone_is_orthant(poly)
    return UpperImage(poly, witnesses)


def _upper_image_refine(m: Molp, ideal: Vec, max_cuts: int):
    outer = hat_of_points([ideal])
    confirmed = {}
    for _ in range(max_cuts):
        pending = [u for u in outer.vertices if u not in confirmed]
        if not pending:
            break
        progressed = False
        for u in pending:
            verdict = _attainability_cut(m, u)
            if verdict[0] == "in":
                confirmed[u] = verdict[1]
            else:
                _, w, gamma = verdict
                assert dot(w, u) < gamma
                outer = UpperSet.wrap(
                    Polyhedron.from_inequalities(
                        outer.hrep.ineqs + ((w, gamma),),
                        outer.hrep.eqs,
                        dim=m.d,
                    )
                )
                progressed = True
                break
        if not progressed:
            break
    else:
        raise RuntimeError("cut budget exhausted in upper image computation")
    witnesses = []
    for u in outer.vertices:
        z = confirmed[u]
        assert mat_vec(m.objective, z) == u  # vertices are minimal
        witnesses.append((u, z))
    return outer, tuple(witnesses)


def _upper_image_lift(m: Molp):
    d, q = m.d, m.q
    ineqs = []
    eqs = []
    for coeffs, sense, rhs in m.rows:
        row = tuple(coeffs) + zeros(d)
        if sense == GE:
            ineqs.append((row, rhs))
        elif sense == LE:
            ineqs.append((tuple(-c for c in row), -rhs))
        else:
            eqs.append((row, rhs))
    for j in range(q):
        if m.lower[j] is not None:
            ineqs.append((unit(q + d, j), m.lower[j]))
        if m.upper[j] is not None:
            ineqs.append((tuple(-c for c in unit(q + d, j)), -m.upper[j]))
    for j in range(d):
        row = tuple(-c for c in m.objective[j]) + unit(d, j)
        ineqs.append((row, ZERO))
    verts, rays = _h_to_generators(HRep(q + d, tuple(ineqs), tuple(eqs)))
    if not verts:
        raise InfeasibleError("feasible set is empty")
    for r in rays:
        vpart = r[q:]
        if any(x < 0 for x in vpart):
            raise UnboundedError(vpart)
    points = {}
    for g in sorted(verts):
        v = g[q:]
        points.setdefault(v, g[:q])
    poly = UpperSet.wrap(
        Polyhedron.from_generators(
            sorted(points),
            sorted({r[q:] for r in rays if not all(x == 0 for x in r[q:])}
                   | {unit(d, j) for j in range(d)}),
        )
    )
    witnesses = []
    for u in poly.vertices:
        z = points[u]
        assert mat_vec(m.objective, z) == u
        witnesses.append((u, z))
    return poly, tuple(witnesses)


def minimal_in(poly: Polyhedron, v) -> bool:
    """v is undominated in the set: min 1.w over {w in set, w <= v}
    cannot fall below 1.v."""
    v = tuple(Rat(x) for x in v)
    if not poly.contains_point(v):
        raise ValueError(f"{v} is not in the set")
    d = poly.dim
    rows = [(a, GE, b) for a, b in poly.hrep.ineqs]
    rows += [(a, EQ, b) for a, b in poly.hrep.eqs]
    for j in range(d):
        rows.append((unit(d, j), LE, v[j]))
    lp = LpProblem.create((Rat(1),) * d, rows)
    res = solve_lp(lp)
    assert res.status == OPTIMAL
    return res.value == sum(v, ZERO)


def is_minimal_point(ui: UpperImage, v) -> bool:
    """No point of the upper image dominates v (v must belong to it)."""
    return minimal_in(ui.poly, v)


def minimizer_for_vertex(m: Molp, ui: UpperImage, v) -> Vec:
    """Deterministic feasible witness z with Pz equal to the vertex v.

    The canonical witness minimizes the coordinate sum of z among all
    feasible points mapping onto v; if that search is unbounded, any
    basic feasible witness is returned instead.
    """
    v = tuple(Rat(x) for x in v)
    if v not in ui.vertices:
        raise ValueError(f"{v} is not a vertex of the upper image")
    extra = [(tuple(m.objective[j]), LE, v[j]) for j in range(m.d)]
    res = solve_lp(m.lp((Rat(1),) * m.q, extra_rows=extra))
    if res.status == UNBOUNDED:
        res = solve_lp(m.lp(zeros(m.q), extra_rows=extra))
    assert res.status == OPTIMAL
    z = res.x[: m.q]
    assert mat_vec(m.objective, z) == v
    return z


def solve_molp(m: Molp, method: str = "refine") -> MolpSolution:
    """One minimizer per upper-image vertex, lex-ordered by vertex."""
    ui = upper_image(m, method=method)
    entries = []
    for v in ui.vertices:
        z = minimizer_for_vertex(m, ui, v)
        entries.append((z, v))
    return MolpSolution(tuple(entries))
