"""Independent test oracles.

Deliberately naive implementations used to compute expected values for
the main solvers: exhaustive basis enumeration for polytope vertices,
rational-weight scalarization sweeps, and 2-d frontier arithmetic based
on sorting and cross products only.  None of these share code paths with
the double-description or refinement algorithms they check.
"""

from itertools import combinations

from recoflex.linalg import dot, gauss_solve, mat_vec
from recoflex.rational import Rat, ZERO
from recoflex.simplex import EQ, GE, LE


def inequality_system(rows, lower, upper):
    """Flatten rows plus bounds into (coeffs, rhs) pairs meaning
    coeffs . x >= rhs, with equalities returned separately."""
    n = len(lower)
    ineqs, eqs = [], []
    for coeffs, sense, rhs in rows:
        if sense == GE:
            ineqs.append((tuple(coeffs), Rat(rhs)))
        elif sense == LE:
            ineqs.append((tuple(-c for c in coeffs), -Rat(rhs)))
        else:
            eqs.append((tuple(coeffs), Rat(rhs)))
    for j in range(n):
        if lower[j] is not None:
            e = tuple(Rat(1) if i == j else ZERO for i in range(n))
            ineqs.append((e, Rat(lower[j])))
        if upper[j] is not None:
            e = tuple(Rat(-1) if i == j else ZERO for i in range(n))
            ineqs.append((e, -Rat(upper[j])))
    return ineqs, eqs


def enumerate_vertices_bruteforce(rows, lower, upper):
    """All vertices of a polytope by trying every potential basis."""
    ineqs, eqs = inequality_system(rows, lower, upper)
    n = len(lower)
    all_rows = [(c, r) for c, r in eqs] + ineqs
    n_eq = len(eqs)
    vertices = set()
    free = range(n_eq, len(all_rows))
    for combo in combinations(free, n - n_eq):
        idx = list(range(n_eq)) + list(combo)
        m = tuple(all_rows[i][0] for i in idx)
        rhs = tuple(all_rows[i][1] for i in idx)
        x = gauss_solve(m, rhs)
        if x is None:
            continue
        if all(dot(c, x) >= r for c, r in ineqs) and all(
            dot(c, x) == r for c, r in eqs
        ):
            vertices.add(x)
    return sorted(vertices)


def weight_grid(d, k):
    """Strictly positive rational weights summing to 1, k+1 per edge."""
    if d == 2:
        return [
            (Rat(i, k + 2), Rat(k + 2 - i, k + 2)) for i in range(1, k + 2)
        ]
    out = []
    for i in range(1, k + 1):
        for j in range(1, k + 1 - i):
            out.append((Rat(i, k + 2), Rat(j, k + 2),
                        Rat(k + 2 - i - j, k + 2)))
    return out


def pareto_min_filter(points):
    """Componentwise-minimal elements of a finite point set."""
    pts = sorted(set(points))
    keep = []
    for p in pts:
        dominated = any(
            q != p and all(a <= b for a, b in zip(q, p)) for q in pts
        )
        if not dominated:
            keep.append(p)
    return keep


def frontier_vertices_2d(points):
    """Extreme points of conv(points) + R^2_+ via a monotone chain.

    Pure comparison/cross-product implementation, independent of the
    package's polyhedral code.
    """
    cand = pareto_min_filter(points)
    cand.sort()
    hull = []
    for p in cand:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # keep the middle point only if strictly below the chord
            cross = (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1)
            if cross <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def minkowski_frontier_2d(points_a, points_b, lam_a=Rat(1), lam_b=Rat(1)):
    """Frontier of lam_a*A + lam_b*B for upper sets spanned by points."""
    sums = [
        (lam_a * a[0] + lam_b * b[0], lam_a * a[1] + lam_b * b[1])
        for a in points_a
        for b in points_b
    ]
    return frontier_vertices_2d(sums)


def scalarization_values(molp, weights, solve_lp_fn):
    """Optimal weighted values via plain scalar LPs (one per weight)."""
    out = []
    for w in weights:
        cost = tuple(
            sum((w[j] * molp.objective[j][i] for j in range(molp.d)), ZERO)
            for i in range(molp.q)
        )
        res = solve_lp_fn(molp.lp(cost))
        assert res.status == "optimal"
        out.append((w, res.value))
    return out
