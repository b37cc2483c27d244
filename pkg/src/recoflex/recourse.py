"""Two-stage multi-objective recourse problems and their set optimization.

A recourse problem fixes a first-stage decision x before one of finitely
many scenarios realizes, then recovers with a scenario-specific second
stage y.  Beyond the classical deterministic-equivalent MOLP, the solver
treats the problem as optimization over the flexibility map

    F(x) = (expected second-stage outcome set of x) + R^d_+,

ordered by reverse inclusion: a first-stage decision is better when it
leaves the decision maker a larger menu of expected outcomes.  A set
solution is a finite family of componentwise-undominated (maximally
flexible) decisions whose flexibility sets jointly span the upper image.

Minimality of x is decided exactly: for every facet H.w >= h of F(x),
an LP searches for a first-stage x' whose flexibility set contains all
vertices of F(x) (one second-stage block per vertex) plus a witness
point w violating the facet.  All facet LPs bounded by h certify that no
strictly larger flexibility set exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .linalg import Mat, Vec, dot, mat_vec, vadd, zeros
from .molp import (
    InfeasibleError,
    Molp,
    UnboundedError,
    UpperImage,
    minimal_in,
    minimizer_for_vertex,
    upper_image,
)
from .polyhedra import Polyhedron, UpperSet, recession_cone_is_orthant, minkowski_sum, scale
from .rational import ONE, Rat, ZERO
from .simplex import EQ, GE, LE, OPTIMAL, UNBOUNDED, LpProblem, solve_lp, solve_many

SENSE_OK = {LE: lambda l, r: l <= r, EQ: lambda l, r: l == r, GE: lambda l, r: l >= r}


@dataclass(frozen=True)
class Scenario:
    label: str
    p: object  # probability, exact rational
    Q: Mat  # d x m second-stage objective block
    T: Mat  # l x n technology matrix
    W: Mat  # l x m recourse matrix
    u: Vec  # l right-hand side
    senses: tuple


@dataclass(frozen=True)
class RecourseProblem:
    name: str
    C: Mat  # d x n first-stage objective
    A: Mat  # k x n first-stage constraints
    b: Vec
    first_senses: tuple
    scenarios: tuple

    def __post_init__(self):
        d, n = len(self.C), len(self.C[0])
        if len(self.A) != len(self.b) or len(self.A) != len(self.first_senses):
            raise ValueError("first-stage row count mismatch")
        for row in self.A:
            if len(row) != n:
                raise ValueError("first-stage matrix width mismatch")
        if not self.scenarios:
            raise ValueError("at least one scenario required")
        m = len(self.scenarios[0].Q[0])
        l = len(self.scenarios[0].W)
        for sc in self.scenarios:
            if len(sc.Q) != d or any(len(r) != m for r in sc.Q):
                raise ValueError(f"scenario {sc.label}: Q block shape mismatch")
            if any(len(r) != n for r in sc.T) or len(sc.T) != l:
                raise ValueError(f"scenario {sc.label}: T block shape mismatch")
            if any(len(r) != m for r in sc.W) or len(sc.W) != l:
                raise ValueError(f"scenario {sc.label}: W block shape mismatch")
            if len(sc.u) != l or len(sc.senses) != l:
                raise ValueError(f"scenario {sc.label}: rhs length mismatch")

    @property
    def d(self):
        return len(self.C)

    @property
    def n(self):
        return len(self.C[0])

    @property
    def k(self):
        return len(self.A)

    @property
    def m(self):
        return len(self.scenarios[0].Q[0])

    @property
    def l(self):
        return len(self.scenarios[0].W)

    @property
    def N(self):
        return len(self.scenarios)

    def scenario(self, label) -> Scenario:
        for sc in self.scenarios:
            if sc.label == label:
                return sc
        raise KeyError(f"unknown scenario {label!r}")


@dataclass(frozen=True)
class FlexSet:
    x: Vec
    outcomes: UpperSet  # flexibility set F(x), possibly empty


@dataclass(frozen=True)
class SetSolution:
    entries: tuple  # FlexSet per kept decision
    minimality_certificates: tuple  # per entry: ((facet, margin), ...)
    vertex_cover: tuple  # (upper-image vertex, entry index) pairs


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple  # (name, ok, detail)

    @property
    def ok(self):
        return all(ok for _, ok, _ in self.checks)

    def failures(self):
        return [(name, detail) for name, ok, detail in self.checks if not ok]


class BudgetExceeded(RuntimeError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


# ---------------------------------------------------------------------------
# Reformulations


@lru_cache(maxsize=None)
def deterministic_equivalent(rp: RecourseProblem) -> Molp:
    """MOLP over z = (x, y_1, ..., y_N) with probability-weighted
    second-stage objective blocks."""
    n, m, N, d = rp.n, rp.m, rp.N, rp.d
    q = n + N * m
    objective = []
    for j in range(d):
        row = list(rp.C[j])
        for sc in rp.scenarios:
            row.extend(sc.p * c for c in sc.Q[j])
        objective.append(row)
    rows = []
    for i in range(rp.k):
        rows.append((tuple(rp.A[i]) + zeros(N * m), rp.first_senses[i], rp.b[i]))
    for s, sc in enumerate(rp.scenarios):
        for i in range(rp.l):
            coeffs = list(sc.T[i]) + [ZERO] * (N * m)
            off = n + s * m
            for jj in range(m):
                coeffs[off + jj] = sc.W[i][jj]
            rows.append((tuple(coeffs), sc.senses[i], sc.u[i]))
    return Molp.create(objective, rows, lower=[0] * q)


@lru_cache(maxsize=None)
def recourse_upper_image(rp: RecourseProblem) -> UpperImage:
    return upper_image(deterministic_equivalent(rp))


def first_stage_feasible(rp: RecourseProblem, x) -> bool:
    x = tuple(Rat(v) for v in x)
    if len(x) != rp.n:
        raise ValueError("first-stage dimension mismatch")
    if any(v < 0 for v in x):
        return False
    return all(
        SENSE_OK[rp.first_senses[i]](dot(rp.A[i], x), rp.b[i])
        for i in range(rp.k)
    )


def _second_stage_molp(rp: RecourseProblem, x, scenarios, weighted: bool) -> Molp:
    """MOLP over the stacked second-stage blocks for a fixed x."""
    m, d = rp.m, rp.d
    nsc = len(scenarios)
    objective = []
    for j in range(d):
        row = []
        for sc in scenarios:
            w = sc.p if weighted else ONE
            row.extend(w * c for c in sc.Q[j])
        objective.append(row)
    rows = []
    for s, sc in enumerate(scenarios):
        for i in range(rp.l):
            coeffs = [ZERO] * (nsc * m)
            for jj in range(m):
                coeffs[s * m + jj] = sc.W[i][jj]
            rows.append((tuple(coeffs), sc.senses[i], sc.u[i] - dot(sc.T[i], x)))
    return Molp.create(objective, rows, lower=[0] * (nsc * m))


def evaluate_F(rp: RecourseProblem, x) -> UpperSet:
    """Flexibility set F(x): expected attainable outcomes of x plus the
    free-disposal cone; empty when x is first-stage infeasible or some
    scenario has no recourse."""
    return _evaluate_F(rp, tuple(Rat(v) for v in x))


@lru_cache(maxsize=None)
def _evaluate_F(rp: RecourseProblem, x) -> UpperSet:
    if not first_stage_feasible(rp, x):
        return UpperSet.empty(rp.d)
    molp = _second_stage_molp(rp, x, rp.scenarios, weighted=True)
    try:
        ui = upper_image(molp)
    except InfeasibleError:
        return UpperSet.empty(rp.d)
    cx = mat_vec(rp.C, x)
    return UpperSet.wrap(ui.poly.translate(cx))


def second_stage_upper_image(rp: RecourseProblem, x, omega) -> UpperSet:
    """Upper image of the single-scenario second-stage MOLP at (x, omega)."""
    return _second_stage_image(rp, tuple(Rat(v) for v in x), omega)


@lru_cache(maxsize=None)
def _second_stage_image(rp: RecourseProblem, x, omega) -> UpperSet:
    sc = rp.scenario(omega)
    molp = _second_stage_molp(rp, x, (sc,), weighted=False)
    try:
        ui = upper_image(molp)
    except InfeasibleError:
        return UpperSet.empty(rp.d)
    return UpperSet.wrap(ui.poly.translate(mat_vec(rp.C, x)))


def expectation_identity_check(rp: RecourseProblem, x) -> bool:
    """F(x) equals the probability-weighted Minkowski combination of the
    per-scenario second-stage upper images."""
    x = tuple(Rat(v) for v in x)
    fx = evaluate_F(rp, x)
    combined = None
    for sc in rp.scenarios:
        part = second_stage_upper_image(rp, x, sc.label)
        if part.is_empty:
            combined = Polyhedron.empty(rp.d)
            break
        part = scale(part, sc.p)
        combined = part if combined is None else minkowski_sum(combined, part)
    if fx.is_empty or combined.is_empty:
        return fx.is_empty and combined.is_empty
    return fx == combined


def validate(rp: RecourseProblem) -> ValidationReport:
    checks = []
    total = sum((sc.p for sc in rp.scenarios), ZERO)
    checks.append(
        (
            "probabilities sum to 1",
            total == 1 and all(sc.p > 0 for sc in rp.scenarios),
            f"sum = {total}",
        )
    )
    try:
        molp = deterministic_equivalent(rp)
        checks.append(("dimensions consistent", True, ""))
    except ValueError as e:
        checks.append(("dimensions consistent", False, str(e)))
        return ValidationReport(tuple(checks))
    try:
        ui = recourse_upper_image(rp)
        checks.append(("deterministic equivalent feasible", True, ""))
        checks.append(
            (
                "recourse problem bounded",
                recession_cone_is_orthant(ui.poly),
                "recession cone of the upper image must be the orthant",
            )
        )
    except InfeasibleError as e:
        checks.append(("deterministic equivalent feasible", False, str(e)))
    except UnboundedError as e:
        checks.append(("recourse problem bounded", False, str(e)))
    return ValidationReport(tuple(checks))


# ---------------------------------------------------------------------------
# Set optimization over the flexibility map


@dataclass(frozen=True)
class ImproveOutcome:
    minimal: bool
    x: Optional[Vec] = None  # strictly more flexible decision when found
    certificate: tuple = ()  # ((facet_index, margin), ...) when minimal


def _improvement_lp_rows(rp: RecourseProblem, vertices):
    """Shared constraint system: find x whose flexibility set contains
    every given vertex, plus one free witness point w.

    Variable layout: x | one second-stage block per vertex | w | block
    for w.  Returns (rows, lower bounds, width, w_offset).
    """
    n, m, N, d = rp.n, rp.m, rp.N, rp.d
    nblocks = len(vertices) + 1
    width = n + nblocks * N * m + d
    w_pos = n + len(vertices) * N * m  # w sits after the vertex blocks
    wy_pos = w_pos + d

    def block_offset(block):
        return n + block * N * m

    rows = []
    for i in range(rp.k):
        rows.append((tuple(rp.A[i]) + zeros(width - n), rp.first_senses[i], rp.b[i]))

    def scenario_rows(offset):
        for s, sc in enumerate(rp.scenarios):
            for i in range(rp.l):
                coeffs = [ZERO] * width
                for j in range(n):
                    coeffs[j] = sc.T[i][j]
                for jj in range(m):
                    coeffs[offset + s * m + jj] = sc.W[i][jj]
                rows.append((tuple(coeffs), sc.senses[i], sc.u[i]))

    def outcome_rows(offset, bound_vec, w_coupled):
        # C x + sum_i p_i Q_i y^i (- w) <= bound
        for j in range(rp.d):
            coeffs = [ZERO] * width
            for jj in range(n):
                coeffs[jj] = rp.C[j][jj]
            for s, sc in enumerate(rp.scenarios):
                for jj in range(m):
                    coeffs[offset + s * m + jj] = sc.p * sc.Q[j][jj]
            if w_coupled:
                coeffs[w_pos + j] = Rat(-1)
            rows.append((tuple(coeffs), LE, bound_vec[j] if bound_vec else ZERO))

    for bidx, v in enumerate(vertices):
        off = block_offset(bidx)
        scenario_rows(off)
        outcome_rows(off, v, w_coupled=False)
    scenario_rows(wy_pos)
    outcome_rows(wy_pos, None, w_coupled=True)

    lower = [ZERO] * width
    for j in range(d):
        lower[w_pos + j] = None  # witness point is free
    return rows, lower, width, w_pos


def improve(rp: RecourseProblem, x, fx: UpperSet = None) -> ImproveOutcome:
    """One exact improvement step of the flexibility order.

    Either finds x' with F(x') strictly containing F(x) (verified by both
    containment directions), or certifies x as a minimizer: for every
    facet H.w >= h of F(x) the best attainable witness satisfies
    min H.w >= h, so no feasible flexibility set exceeds F(x).

    Facets that support the whole upper image are certified without an
    LP (no subset of the image can beat them); their recorded margin is
    the conservative bound h - min over upper-image vertices.
    """
    return _improve(rp, tuple(Rat(v) for v in x))


@lru_cache(maxsize=None)
def _improve(rp: RecourseProblem, x) -> ImproveOutcome:
    fx = evaluate_F(rp, x)
    if fx.is_empty:
        raise ValueError("flexibility set of an infeasible decision")
    assert not fx.hrep.eqs  # upper sets are full-dimensional
    image_vertices = recourse_upper_image(rp).vertices
    certificate = {}
    pending = []
    for fidx, (coeffs, rhs) in enumerate(fx.hrep.ineqs):
        assert all(c >= 0 for c in coeffs)
        lo = min(dot(coeffs, v) for v in image_vertices)
        if lo >= rhs:
            certificate[fidx] = rhs - lo
        else:
            pending.append((fidx, coeffs, rhs))
    best = None
    if pending:
        rows, lower, width, w_pos = _improvement_lp_rows(rp, fx.vertices)
        objectives = []
        for _, coeffs, _ in pending:
            objective = [ZERO] * width
            for j in range(rp.d):
                objective[w_pos + j] = coeffs[j]
            objectives.append(objective)
        base = LpProblem.create(objectives[0], rows, lower=lower)
        results = solve_many(base, objectives)
        for (fidx, _, rhs), res in zip(pending, results):
            assert res.status == OPTIMAL, "facet LP must be feasible/bounded"
            margin = rhs - res.value  # positive: facet can be beaten
            certificate[fidx] = margin
            if margin > 0 and (best is None or margin > best[0]):
                best = (margin, res.x[: rp.n])
    if best is None:
        return ImproveOutcome(
            minimal=True, certificate=tuple(sorted(certificate.items()))
        )
    candidate = best[1]
    fnew = evaluate_F(rp, candidate)
    assert fnew.contains_set(fx) and not fx.contains_set(fnew)
    return ImproveOutcome(minimal=False, x=candidate)


def certified_minimal(rp: RecourseProblem, x) -> bool:
    fx = evaluate_F(rp, tuple(Rat(v) for v in x))
    if fx.is_empty:
        return False
    return improve(rp, x, fx).minimal


def solve_set_problem(rp: RecourseProblem, budget: int = 100) -> SetSolution:
    return _solve_set_problem(rp, budget)


@lru_cache(maxsize=None)
def _solve_set_problem(rp: RecourseProblem, budget: int) -> SetSolution:
    """Vertex-anchored solution of the flexibility-set optimization.

    For every vertex of the upper image, starts from its canonical
    minimizer and walks the improvement order until certified minimal;
    identical flexibility sets are merged.  The result satisfies both
    infimum attainment and per-entry minimality by construction
    (asserted).
    """
    ui = recourse_upper_image(rp)
    molp = deterministic_equivalent(rp)
    resolved = {}  # starting x -> (final x, F, certificate)
    final = []
    for v in ui.vertices:
        z = minimizer_for_vertex(molp, ui, v)
        x = z[: rp.n]
        path = []
        while True:
            if x in resolved:
                result = resolved[x]
                break
            fx = evaluate_F(rp, x)
            out = improve(rp, x, fx)
            if out.minimal:
                result = (x, fx, out.certificate)
                break
            path.append(x)
            x = out.x
            if len(path) > budget:
                raise BudgetExceeded(
                    f"improvement budget {budget} exhausted at vertex {v}",
                    partial=tuple(final),
                )
        for px in path:
            resolved[px] = result
        resolved[result[0]] = result
        final.append(result)
    # Deduplicate identical flexibility sets, deterministic order by x.
    seen = {}
    for x, fx, cert in final:
        if fx not in seen:
            seen[fx] = (x, fx, cert)
    kept = sorted(seen.values(), key=lambda t: t[0])
    entries = tuple(FlexSet(x, fx) for x, fx, _ in kept)
    certs = tuple(cert for _, _, cert in kept)
    cover = []
    for v in ui.vertices:
        idx = next(
            i for i, e in enumerate(entries) if e.outcomes.contains_point(v)
        )
        cover.append((v, idx))
    sol = SetSolution(entries, certs, tuple(cover))
    assert infimum_attained(rp, sol)
    return sol


def _union_upper_hull(rp: RecourseProblem, flex_sets):
    gens = []
    rays = set()
    for fs in flex_sets:
        if fs.is_empty:
            continue
        gens.extend(fs.vertices)
        rays.update(fs.rays)
    if not gens:
        return Polyhedron.empty(rp.d)
    return Polyhedron.from_generators(sorted(set(gens)), sorted(rays))


def infimum_attained(rp: RecourseProblem, sol: SetSolution) -> bool:
    """conv of the union of the solution's flexibility sets plus the
    orthant reproduces the upper image exactly."""
    hull = _union_upper_hull(rp, [e.outcomes for e in sol.entries])
    return hull == recourse_upper_image(rp).poly


@dataclass(frozen=True)
class SetSolutionReport:
    entries: tuple  # (x, feasible, minimal)
    infimum_attained: bool

    @property
    def valid(self):
        return self.infimum_attained and all(
            feas and mini for _, feas, mini in self.entries
        )

    def failures(self):
        out = []
        for x, feas, mini in self.entries:
            if not feas:
                out.append(f"x={x}: first stage infeasible or no recourse")
            elif not mini:
                out.append(f"x={x}: not maximally flexible")
        if not self.infimum_attained:
            out.append("union of flexibility sets misses part of the upper image")
        return out


def validate_set_solution(rp: RecourseProblem, xs) -> SetSolutionReport:
    """Check a proposed family for per-entry maximal flexibility and
    exact coverage of the upper image."""
    entries = []
    flex = []
    for x in xs:
        x = tuple(Rat(v) for v in x)
        fx = evaluate_F(rp, x)
        if fx.is_empty:
            entries.append((x, False, False))
            continue
        flex.append(fx)
        entries.append((x, True, improve(rp, x, fx).minimal))
    hull = _union_upper_hull(rp, flex)
    att = (not hull.is_empty) and hull == recourse_upper_image(rp).poly
    return SetSolutionReport(tuple(entries), att)


# ---------------------------------------------------------------------------
# Structural identities


def split_decision(rp: RecourseProblem, z) -> tuple:
    z = tuple(Rat(v) for v in z)
    n, m = rp.n, rp.m
    x = z[:n]
    ys = tuple(z[n + s * m : n + (s + 1) * m] for s in range(rp.N))
    return x, ys


def prop_second_stage_minimality(rp: RecourseProblem, z) -> bool:
    """Every second-stage block of a deterministic-equivalent minimizer
    is itself minimal for its scenario subproblem."""
    x, ys = split_decision(rp, z)
    if not first_stage_feasible(rp, x):
        raise ValueError("decision is first-stage infeasible")
    for sc, y in zip(rp.scenarios, ys):
        img = second_stage_upper_image(rp, x, sc.label)
        if img.is_empty:
            raise ValueError(f"scenario {sc.label}: second stage infeasible")
        outcome = vadd(mat_vec(rp.C, x), mat_vec(sc.Q, y))
        if not img.contains_point(outcome):
            raise ValueError(f"scenario {sc.label}: infeasible block")
        if not minimal_in(img, outcome):
            return False
    return True


def flexibility_spans_upper_image(rp: RecourseProblem) -> bool:
    """The union of the set solution's flexibility sets spans the same
    upper image as the deterministic equivalent."""
    sol = solve_set_problem(rp)
    return infimum_attained(rp, sol)
