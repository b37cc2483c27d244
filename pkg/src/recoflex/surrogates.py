"""Surrogate analyses for recourse problems.

Wait-and-see lets both stages observe the scenario first; its upper
image always contains the recourse problem's and decomposes exactly into
the probability-weighted Minkowski sum of per-scenario images.  The
pointwise gap is captured per outcome v by the set of componentwise
improvements available under perfect information,
EVPI(v) = {c >= 0 : v - c in WS image}.

The expected value problem replaces all random data by expectations; its
image contains the recourse image when the second-stage objective and
recourse blocks are scenario-constant, and can lose that inclusion
otherwise (witnesses are extracted).  Fixing a first stage x in the true
problem yields the expected outcome set EEV(x), which is exactly the
flexibility set F(x) and always sits inside the recourse image.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .linalg import dot, mat, unit, vec, zeros
from .molp import InfeasibleError, Molp, UnboundedError, upper_image
from .polyhedra import Polyhedron, UpperSet, minkowski_sum, scale
from .rational import ONE, Rat, ZERO, format_rational
from .recourse import (
    RecourseProblem,
    Scenario,
    SetSolution,
    SetSolutionReport,
    evaluate_F,
    recourse_upper_image,
    solve_set_problem,
    validate_set_solution,
)


class NotInUpperImage(ValueError):
    pass


class ScenarioSolveError(ValueError):
    def __init__(self, label, reason):
        super().__init__(f"scenario {label!r}: {reason}")
        self.label = label


@dataclass(frozen=True)
class WsDecomposition:
    scenario_images: tuple  # ((label, UpperSet), ...)
    combined: UpperSet  # probability-weighted Minkowski combination

    def scenario_image(self, label) -> UpperSet:
        for lab, img in self.scenario_images:
            if lab == label:
                return img
        raise KeyError(label)


@dataclass(frozen=True)
class EvpiRegion:
    v: tuple
    region: Polyhedron  # improvements {c >= 0 : v - c in WS image}


def _ws_scenario_molp(rp: RecourseProblem, sc: Scenario) -> Molp:
    n, m = rp.n, rp.m
    objective = [tuple(rp.C[j]) + tuple(sc.Q[j]) for j in range(rp.d)]
    rows = []
    for i in range(rp.k):
        rows.append((tuple(rp.A[i]) + zeros(m), rp.first_senses[i], rp.b[i]))
    for i in range(rp.l):
        rows.append(
            (tuple(sc.T[i]) + tuple(sc.W[i]), sc.senses[i], sc.u[i])
        )
    return Molp.create(objective, rows, lower=[0] * (n + m))


def wait_and_see(rp: RecourseProblem) -> WsDecomposition:
    return _wait_and_see(rp)


@lru_cache(maxsize=None)
def _wait_and_see(rp: RecourseProblem) -> WsDecomposition:
    images = []
    for sc in rp.scenarios:
        try:
            ui = upper_image(_ws_scenario_molp(rp, sc))
        except (InfeasibleError, UnboundedError) as e:
            raise ScenarioSolveError(sc.label, str(e)) from e
        images.append((sc.label, ui.poly))
    combined = None
    for (label, img), sc in zip(images, rp.scenarios):
        part = scale(img, sc.p)
        combined = part if combined is None else minkowski_sum(combined, part)
    return WsDecomposition(tuple(images), UpperSet.wrap(combined))


def wait_and_see_monolithic(rp: RecourseProblem) -> UpperSet:
    """The undecomposed wait-and-see MOLP over scenario copies of both
    stages; used to cross-check the Minkowski decomposition."""
    n, m, N = rp.n, rp.m, rp.N
    span = N * (n + m)

    def x_off(s):
        return s * (n + m)

    def y_off(s):
        return s * (n + m) + n

    objective = []
    for j in range(rp.d):
        row = [ZERO] * span
        for s, sc in enumerate(rp.scenarios):
            for jj in range(n):
                row[x_off(s) + jj] = sc.p * rp.C[j][jj]
            for jj in range(m):
                row[y_off(s) + jj] = sc.p * sc.Q[j][jj]
        objective.append(row)
    rows = []
    for s, sc in enumerate(rp.scenarios):
        for i in range(rp.k):
            coeffs = [ZERO] * span
            for jj in range(n):
                coeffs[x_off(s) + jj] = rp.A[i][jj]
            rows.append((tuple(coeffs), rp.first_senses[i], rp.b[i]))
        for i in range(rp.l):
            coeffs = [ZERO] * span
            for jj in range(n):
                coeffs[x_off(s) + jj] = sc.T[i][jj]
            for jj in range(m):
                coeffs[y_off(s) + jj] = sc.W[i][jj]
            rows.append((tuple(coeffs), sc.senses[i], sc.u[i]))
    molp = Molp.create(objective, rows, lower=[0] * span)
    return upper_image(molp).poly


def evpi(rp: RecourseProblem, v) -> EvpiRegion:
    """Set-valued expected value of perfect information at decision v."""
    v = tuple(Rat(x) for x in v)
    image = recourse_upper_image(rp).poly
    if not image.contains_point(v):
        raise NotInUpperImage("decision not in upper image")
    ws = wait_and_see(rp).combined
    ineqs = []
    for coeffs, rhs in ws.hrep.ineqs:
        ineqs.append((tuple(-c for c in coeffs), rhs - dot(coeffs, v)))
    for j in range(rp.d):
        ineqs.append((unit(rp.d, j), ZERO))
    region = Polyhedron.from_inequalities(ineqs, dim=rp.d)
    assert not region.is_empty  # guaranteed by WS containing RP
    return EvpiRegion(v, region)


def _expected_blocks(rp: RecourseProblem):
    senses = rp.scenarios[0].senses
    for sc in rp.scenarios:
        if sc.senses != senses:
            raise ValueError(
                "expected value problem needs identical senses across scenarios"
            )

    def average(select):
        rows = len(select(rp.scenarios[0]))
        cols = len(select(rp.scenarios[0])[0]) if rows else 0
        out = [[ZERO] * cols for _ in range(rows)]
        for sc in rp.scenarios:
            block = select(sc)
            for i in range(rows):
                for j in range(cols):
                    out[i][j] += sc.p * block[i][j]
        return mat(out)

    eq = average(lambda sc: sc.Q)
    et = average(lambda sc: sc.T)
    ew = average(lambda sc: sc.W)
    eu = vec(
        sum((sc.p * sc.u[i] for sc in rp.scenarios), ZERO)
        for i in range(rp.l)
    )
    return eq, et, ew, eu, senses


def expected_value_problem(rp: RecourseProblem) -> Molp:
    """Single-scenario MOLP with all random blocks replaced by their
    probability-weighted means; size independent of the scenario count."""
    eq, et, ew, eu, senses = _expected_blocks(rp)
    n, m = rp.n, rp.m
    objective = [tuple(rp.C[j]) + tuple(eq[j]) for j in range(rp.d)]
    rows = []
    for i in range(rp.k):
        rows.append((tuple(rp.A[i]) + zeros(m), rp.first_senses[i], rp.b[i]))
    for i in range(rp.l):
        rows.append((tuple(et[i]) + tuple(ew[i]), senses[i], eu[i]))
    return Molp.create(objective, rows, lower=[0] * (n + m))


def averaged_problem(rp: RecourseProblem) -> RecourseProblem:
    """The expected value problem rebuilt as a one-scenario recourse
    problem, so the flexibility-set machinery applies unchanged."""
    eq, et, ew, eu, senses = _expected_blocks(rp)
    return RecourseProblem(
        name=f"{rp.name}-expected",
        C=rp.C,
        A=rp.A,
        b=rp.b,
        first_senses=rp.first_senses,
        scenarios=(
            Scenario("expected", ONE, eq, et, ew, eu, senses),
        ),
    )


@lru_cache(maxsize=None)
def ev_upper_image(rp: RecourseProblem) -> UpperSet:
    return upper_image(expected_value_problem(rp)).poly


def solve_ev_star(rp: RecourseProblem) -> SetSolution:
    return solve_set_problem(averaged_problem(rp))


def validate_ev_star_solution(rp: RecourseProblem, xs) -> SetSolutionReport:
    return validate_set_solution(averaged_problem(rp), xs)


def eev_upper_image(rp: RecourseProblem, x) -> UpperSet:
    """Expected outcome set of the true problem with the first stage
    fixed at x; empty exactly when x has no full recourse."""
    return evaluate_F(rp, x)


# ---------------------------------------------------------------------------
# Inclusion report


@dataclass(frozen=True)
class RelationResult:
    name: str
    holds: bool
    witness: Optional[tuple] = None  # point in the inner set, not the outer
    notes: str = ""


@dataclass(frozen=True)
class InclusionReport:
    relations: tuple
    q_constant: bool
    w_constant: bool
    max_gain_recourse: object
    max_gain_eev_family: Optional[object]
    max_gain_reached: Optional[bool]
    eev_decisions: tuple

    def to_json(self) -> dict:
        rels = []
        for r in self.relations:
            entry = {"relation": r.name, "holds": r.holds}
            if r.witness is not None:
                entry["witness"] = [format_rational(c) for c in r.witness]
            if r.notes:
                entry["notes"] = r.notes
            rels.append(entry)
        out = {
            "relations": rels,
            "hypotheses": {
                "Q_constant": self.q_constant,
                "W_constant": self.w_constant,
            },
            "max_gain": {
                "recourse": format_rational(self.max_gain_recourse),
                "eev_family": None
                if self.max_gain_eev_family is None
                else format_rational(self.max_gain_eev_family),
                "reached_by_eev_family": self.max_gain_reached,
            },
            "eev_decisions": [
                [format_rational(c) for c in x] for x in self.eev_decisions
            ],
        }
        return out


def _containment_witness(outer: Polyhedron, inner: Polyhedron):
    """A vertex of inner outside outer, or None when contained.

    Complete for upper sets under the boundedness assumption: both have
    ray set equal to the unit rays, so containment reduces to vertices.
    """
    for v in inner.vertices:
        if not outer.contains_point(v):
            return v
    return None


def inclusion_report(rp: RecourseProblem, eev_decisions=None) -> InclusionReport:
    """Checks the surrogate inclusion chain and reports the maximal-gain
    comparison between the recourse image and the EEV family.

    The wait-and-see and EEV inclusions are structural and asserted; the
    expected-value inclusion is only guaranteed for scenario-constant
    second-stage objective and recourse blocks and is otherwise reported
    with a concrete witness when violated.
    """
    image = recourse_upper_image(rp).poly
    relations = []

    ws = wait_and_see(rp).combined
    ws_witness = _containment_witness(ws, image)
    assert ws_witness is None, "wait-and-see image must contain the recourse image"
    relations.append(RelationResult("WS⊇RP", True))

    q_constant = all(sc.Q == rp.scenarios[0].Q for sc in rp.scenarios)
    w_constant = all(sc.W == rp.scenarios[0].W for sc in rp.scenarios)
    ev = ev_upper_image(rp)
    ev_witness = _containment_witness(ev, image)
    if q_constant and w_constant:
        assert ev_witness is None, (
            "expected-value image must contain the recourse image for "
            "scenario-constant Q and W"
        )
    reverse = _containment_witness(image, ev)
    notes = ""
    if reverse is not None:
        notes = "reverse direction also fails" if ev_witness is not None else (
            "holds; reverse direction fails"
        )
    relations.append(
        RelationResult(
            "EV⊇RP", ev_witness is None, witness=ev_witness, notes=notes
        )
    )

    if eev_decisions is None:
        eev_decisions = tuple(e.x for e in solve_ev_star(rp).entries)
    else:
        eev_decisions = tuple(tuple(Rat(c) for c in x) for x in eev_decisions)
    eev_sets = []
    for x in eev_decisions:
        fx = eev_upper_image(rp, x)
        label = "RP⊇EEV(x=" + ",".join(str(format_rational(c)) for c in x) + ")"
        if fx.is_empty:
            relations.append(
                RelationResult(label, True, notes="EEV infeasible for this x")
            )
            continue
        witness = _containment_witness(image, fx)
        assert witness is None, "recourse image must contain every EEV set"
        relations.append(RelationResult(label, True))
        eev_sets.append(fx)

    max_gain_rp = -min(v[0] for v in image.vertices)
    max_gain_eev = None
    reached = None
    if eev_sets:
        max_gain_eev = -min(
            v[0] for fx in eev_sets for v in fx.vertices
        )
        reached = max_gain_eev == max_gain_rp
    return InclusionReport(
        relations=tuple(relations),
        q_constant=q_constant,
        w_constant=w_constant,
        max_gain_recourse=max_gain_rp,
        max_gain_eev_family=max_gain_eev,
        max_gain_reached=reached,
        eev_decisions=eev_decisions,
    )
