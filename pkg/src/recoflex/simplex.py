"""Exact two-phase primal simplex over rationals with Bland's rule.

Problems are stated as free-form rows (<=, ==, >=) plus per-variable
bounds; slack, shift/mirror/split substitutions and artificial variables
are handled internally.  Bland's anti-cycling pivot rule plus canonical
rational arithmetic make every result byte-reproducible.

Row duals are reported for optimal solutions with the convention
    value = sum_i dual_i * rhs_i + (contributions of active bounds),
so duals of binding <= rows are nonpositive and of >= rows nonnegative
for a minimization problem.

``solve_many`` re-optimizes one constraint system under a sequence of
objectives, sharing the feasibility phase and the running basis; callers
with many objectives over a common system (facet certification, ideal
points) use it to avoid repeated phase-1 work.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .linalg import Vec, dot
from .rational import Rat, ZERO

LE = "<="
EQ = "=="
GE = ">="
SENSES = (LE, EQ, GE)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class DimensionError(ValueError):
    pass


class PivotBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class LpProblem:
    objective: Vec
    rows: tuple  # ((coeffs, sense, rhs), ...)
    lower: tuple  # Rat or None (= -inf) per variable
    upper: tuple  # Rat or None (= +inf) per variable

    @staticmethod
    def create(objective, rows, lower=None, upper=None):
        obj = tuple(Rat(c) for c in objective)
        n = len(obj)
        norm_rows = []
        for coeffs, sense, rhs in rows:
            coeffs = tuple(Rat(c) for c in coeffs)
            if len(coeffs) != n:
                raise DimensionError(
                    f"row has {len(coeffs)} coefficients, expected {n}"
                )
            if sense not in SENSES:
                raise ValueError(f"unknown sense {sense!r}")
            norm_rows.append((coeffs, sense, Rat(rhs)))
        lo = tuple((None if l is None else Rat(l)) for l in (lower or (None,) * n))
        up = tuple((None if u is None else Rat(u)) for u in (upper or (None,) * n))
        if len(lo) != n or len(up) != n:
            raise DimensionError("bound vectors must match variable count")
        return LpProblem(obj, tuple(norm_rows), lo, up)


@dataclass(frozen=True)
class LpResult:
    status: str
    value: Optional[object] = None
    x: Optional[Vec] = None
    ray: Optional[Vec] = None
    row_duals: Optional[Vec] = None
    pivots: int = 0


class _Simplex:
    """Standard-form tableau shared across successive objectives."""

    def __init__(self, problem: LpProblem, max_pivots: int):
        self.problem = problem
        self.max_pivots = max_pivots
        self.pivots = 0
        self.bound_conflict = False
        n = len(problem.objective)

        subs = []  # ("shift", l, t) | ("mirror", u, t) | ("split", None, t)
        nt = 0
        bound_rows = []
        for j in range(n):
            l, u = problem.lower[j], problem.upper[j]
            if l is not None:
                if u is not None:
                    if l > u:
                        self.bound_conflict = True
                        return
                    bound_rows.append((nt, u - l))
                subs.append(("shift", l, nt))
                nt += 1
            elif u is not None:
                subs.append(("mirror", u, nt))
                nt += 1
            else:
                subs.append(("split", None, nt))
                nt += 2
        self.subs = subs
        self.nt = nt

        std = []
        for coeffs, sense, rhs in problem.rows:
            tc, shift = self._transform(coeffs)
            std.append((tc, sense, rhs - shift))
        self.n_user = len(problem.rows)
        for t, ub in bound_rows:
            tc = [ZERO] * nt
            tc[t] = Rat(1)
            std.append((tc, LE, ub))

        m = len(std)
        self.m = m
        n_slack = sum(1 for _, sense, _ in std if sense != EQ)
        self.art0 = nt + n_slack
        width = nt + n_slack + m
        self.width = width
        tableau = []
        row_sign = []
        basis = []
        slack_at = 0
        for i, (tc, sense, rhs) in enumerate(std):
            row = tc + [ZERO] * (n_slack + m) + [rhs]
            slack_col = None
            if sense != EQ:
                slack_col = nt + slack_at
                row[slack_col] = Rat(1) if sense == LE else Rat(-1)
                slack_at += 1
            if rhs < 0:
                row = [-v for v in row]
                row_sign.append(Rat(-1))
            else:
                row_sign.append(Rat(1))
            row[self.art0 + i] = Rat(1)
            # prefer the slack as the starting basic variable when its
            # post-flip coefficient is +1; otherwise take the artificial
            if slack_col is not None and row[slack_col] == 1:
                basis.append(slack_col)
            else:
                basis.append(self.art0 + i)
            tableau.append(row)
        self.tableau = tableau
        self.row_sign = row_sign
        self.basis = basis
        self.live_rows = list(range(m))

    def _transform(self, coeffs):
        out = [ZERO] * self.nt
        shift = ZERO
        for j, c in enumerate(coeffs):
            kind, val, t = self.subs[j]
            if c == 0:
                continue
            if kind == "shift":
                out[t] += c
                shift += c * val
            elif kind == "mirror":
                out[t] -= c
                shift += c * val
            else:
                out[t] += c
                out[t + 1] -= c
        return out, shift

    def _pivot(self, obj, row, col):
        tableau = self.tableau
        prow = tableau[row]
        inv = 1 / prow[col]
        prow = [v * inv for v in prow]
        tableau[row] = prow
        for i, r in enumerate(tableau):
            if i != row and r[col] != 0:
                f = r[col]
                tableau[i] = [a - f * b for a, b in zip(r, prow)]
        if obj[col] != 0:
            f = obj[col]
            for j in range(len(obj)):
                obj[j] -= f * prow[j]
        self.basis[row] = col

    def _run(self, obj, blocked_art):
        width = self.width
        art0 = self.art0
        tableau = self.tableau
        basis = self.basis
        while True:
            enter = None
            for j in range(width):
                if obj[j] < 0 and not (blocked_art and j >= art0):
                    enter = j
                    break
            if enter is None:
                return OPTIMAL
            best_row = None
            best_ratio = None
            for i, r in enumerate(tableau):
                a = r[enter]
                if a > 0:
                    ratio = r[-1] / a
                    if (
                        best_ratio is None
                        or ratio < best_ratio
                        or (ratio == best_ratio and basis[i] < basis[best_row])
                    ):
                        best_ratio = ratio
                        best_row = i
            if best_row is None:
                return UNBOUNDED
            self.pivots += 1
            if self.pivots > self.max_pivots:
                raise PivotBudgetExceeded(
                    f"pivot budget {self.max_pivots} exhausted"
                )
            self._pivot(obj, best_row, enter)

    def phase1(self) -> bool:
        """Minimize the artificial sum; True iff the system is feasible."""
        obj = [ZERO] * (self.width + 1)
        for j in range(self.art0, self.art0 + self.m):
            obj[j] = Rat(1)
        for i, row in enumerate(self.tableau):
            if self.basis[i] >= self.art0:
                for j in range(self.width + 1):
                    obj[j] -= row[j]
        status = self._run(obj, blocked_art=False)
        assert status == OPTIMAL
        if -obj[-1] > 0:
            return False
        # Drive leftover artificials out; drop redundant rows.
        dropped = set()
        for i in range(self.m):
            pos = self._row_pos(i)
            if pos is None:
                continue
            if self.basis[pos] >= self.art0:
                col = next(
                    (j for j in range(self.art0) if self.tableau[pos][j] != 0),
                    None,
                )
                if col is None:
                    dropped.add(i)
                else:
                    self.pivots += 1
                    self._pivot(obj, pos, col)
        if dropped:
            keep = [p for p, i in enumerate(self.live_rows) if i not in dropped]
            self.tableau = [self.tableau[p] for p in keep]
            self.basis = [self.basis[p] for p in keep]
            self.live_rows = [self.live_rows[p] for p in keep]
        return True

    def _row_pos(self, std_index):
        try:
            return self.live_rows.index(std_index)
        except ValueError:
            return None

    def _c2_for(self, objective):
        c2 = [ZERO] * self.width
        tobj, _ = self._transform(objective)
        for t in range(self.nt):
            c2[t] = tobj[t]
        return c2

    def _t_to_x(self, tvals):
        out = []
        for kind, val, t in self.subs:
            if kind == "shift":
                out.append(val + tvals[t])
            elif kind == "mirror":
                out.append(val - tvals[t])
            else:
                out.append(tvals[t] - tvals[t + 1])
        return tuple(out)

    def optimize(self, objective) -> LpResult:
        """Phase-2 run for one objective from the current basis."""
        c2 = self._c2_for(objective)
        obj = list(c2) + [ZERO]
        for i, row in enumerate(self.tableau):
            cb = c2[self.basis[i]]
            if cb != 0:
                for j in range(self.width + 1):
                    obj[j] -= cb * row[j]
        status = self._run(obj, blocked_art=True)
        if status == UNBOUNDED:
            enter = next(
                j for j in range(self.art0) if obj[j] < 0
            )
            d = [ZERO] * self.width
            d[enter] = Rat(1)
            for i, row in enumerate(self.tableau):
                if row[enter] != 0:
                    d[self.basis[i]] = -row[enter]
            ray = []
            for kind, val, t in self.subs:
                if kind == "shift":
                    ray.append(d[t])
                elif kind == "mirror":
                    ray.append(-d[t])
                else:
                    ray.append(d[t] - d[t + 1])
            return LpResult(UNBOUNDED, ray=tuple(ray), pivots=self.pivots)
        tvals = [ZERO] * self.width
        for i, row in enumerate(self.tableau):
            tvals[self.basis[i]] = row[-1]
        x = self._t_to_x(tvals)
        value = dot(objective, x)
        duals = [ZERO] * self.m
        for i in self.live_rows:
            art_col = self.art0 + i
            y = ZERO
            for r, row in enumerate(self.tableau):
                cb = c2[self.basis[r]]
                if cb != 0 and row[art_col] != 0:
                    y += cb * row[art_col]
            duals[i] = self.row_sign[i] * y
        return LpResult(
            OPTIMAL,
            value=value,
            x=x,
            row_duals=tuple(duals[: self.n_user]),
            pivots=self.pivots,
        )


def solve_lp(problem: LpProblem, max_pivots: int = 200_000) -> LpResult:
    """Solve exactly; deterministic for identical inputs."""
    return solve_many(problem, (problem.objective,), max_pivots)[0]


def solve_many(problem: LpProblem, objectives, max_pivots: int = 200_000):
    """Solve one constraint system under several objectives.

    Feasibility is established once; each objective re-optimizes from
    the basis left by the previous one.  Results are independent of this
    warm start except for the (deterministic) choice among alternate
    optima.
    """
    n = len(problem.objective)
    for coeffs, _, _ in problem.rows:
        if len(coeffs) != n:
            raise DimensionError("row width does not match objective")
    objectives = [tuple(Rat(c) for c in o) for o in objectives]
    for o in objectives:
        if len(o) != n:
            raise DimensionError("objective width mismatch")
    sx = _Simplex(problem, max_pivots)
    if sx.bound_conflict or not sx.phase1():
        return [LpResult(INFEASIBLE, pivots=getattr(sx, "pivots", 0))] * len(
            objectives
        )
    return [sx.optimize(o) for o in objectives]
