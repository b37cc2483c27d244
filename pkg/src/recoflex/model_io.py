"""Problem file format, newsvendor generator, CSV ingestion and JSON
serialization of analysis results.

Problem documents are plain JSON with exact rationals written as
'num/den' strings or bare integers; parsing is strict and reports the
JSON path of the offending element.
"""

from __future__ import annotations

import csv
import io
import json
import warnings
from dataclasses import dataclass

from .linalg import mat, vec
from .polyhedra import Polyhedron, UpperSet, poly_to_json
from .rational import Rat, RationalFormatError, format_rational, parse_rational
from .recourse import RecourseProblem, Scenario, SetSolution
from .simplex import EQ, GE, LE

_SENSES = {"<=": LE, "==": EQ, ">=": GE, "=": EQ}


class ProblemFormatError(ValueError):
    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
        self.reason = message


def _rat_at(value, path):
    try:
        return parse_rational(value)
    except RationalFormatError as e:
        raise ProblemFormatError(str(e), path) from None


def _matrix_at(doc, key, rows, cols, path):
    raw = doc.get(key)
    if raw is None:
        raise ProblemFormatError(f"missing key {key!r}", path)
    if len(raw) != rows:
        raise ProblemFormatError(
            f"expected {rows} rows, found {len(raw)}", f"{path}.{key}"
        )
    out = []
    for i, row in enumerate(raw):
        if len(row) != cols:
            raise ProblemFormatError(
                f"expected {cols} entries, found {len(row)}",
                f"{path}.{key}[{i}]",
            )
        out.append([_rat_at(v, f"{path}.{key}[{i}][{j}]") for j, v in enumerate(row)])
    return mat(out)


def _vector_at(doc, key, length, path):
    raw = doc.get(key)
    if raw is None:
        raise ProblemFormatError(f"missing key {key!r}", path)
    if len(raw) != length:
        raise ProblemFormatError(
            f"expected {length} entries, found {len(raw)}", f"{path}.{key}"
        )
    return vec(_rat_at(v, f"{path}.{key}[{i}]") for i, v in enumerate(raw))


def _senses_at(doc, key, length, path):
    raw = doc.get(key)
    if raw is None:
        raise ProblemFormatError(f"missing key {key!r}", path)
    if len(raw) != length:
        raise ProblemFormatError(
            f"expected {length} senses, found {len(raw)}", f"{path}.{key}"
        )
    out = []
    for i, s in enumerate(raw):
        if s not in _SENSES:
            raise ProblemFormatError(
                f"unknown sense {s!r}", f"{path}.{key}[{i}]"
            )
        out.append(_SENSES[s])
    return tuple(out)


def parse_problem(text: str) -> RecourseProblem:
    """Strict parse of a problem document; raises ProblemFormatError with
    the JSON path of the first offending element."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProblemFormatError(f"invalid JSON: {e}", "$") from None
    return problem_from_dict(doc)


def problem_from_dict(doc: dict) -> RecourseProblem:
    for key in ("d", "n", "m", "k", "l"):
        if key not in doc:
            raise ProblemFormatError(f"missing key {key!r}", "$")
        if not isinstance(doc[key], int) or doc[key] < 0:
            raise ProblemFormatError(
                f"{key} must be a nonnegative integer", f"$.{key}"
            )
    d, n, m, k, l = (doc[key] for key in ("d", "n", "m", "k", "l"))
    if d < 1 or n < 1 or m < 1:
        raise ProblemFormatError("d, n and m must be positive", "$")
    name = doc.get("name", "problem")
    C = _matrix_at(doc, "C", d, n, "$")
    A = _matrix_at(doc, "A", k, n, "$")
    b = _vector_at(doc, "b", k, "$")
    senses = _senses_at(doc, "first_stage_senses", k, "$")
    raw_scenarios = doc.get("scenarios")
    if not raw_scenarios:
        raise ProblemFormatError("missing or empty key 'scenarios'", "$")
    scenarios = []
    for s, sdoc in enumerate(raw_scenarios):
        path = f"$.scenarios[{s}]"
        label = sdoc.get("label")
        if not label:
            raise ProblemFormatError("missing key 'label'", path)
        if "p" not in sdoc:
            raise ProblemFormatError("missing key 'p'", path)
        p = _rat_at(sdoc["p"], f"{path}.p")
        if p <= 0:
            raise ProblemFormatError("probability must be positive", f"{path}.p")
        scenarios.append(
            Scenario(
                label=label,
                p=p,
                Q=_matrix_at(sdoc, "Q", d, m, path),
                T=_matrix_at(sdoc, "T", l, n, path),
                W=_matrix_at(sdoc, "W", l, m, path),
                u=_vector_at(sdoc, "u", l, path),
                senses=_senses_at(sdoc, "senses", l, path),
            )
        )
    total = sum(sc.p for sc in scenarios)
    if total != 1:
        raise ProblemFormatError(
            f"probabilities sum to {format_rational(total)} ≠ 1",
            "$.scenarios",
        )
    labels = [sc.label for sc in scenarios]
    if len(set(labels)) != len(labels):
        raise ProblemFormatError("duplicate scenario labels", "$.scenarios")
    try:
        return RecourseProblem(
            name=name, C=C, A=A, b=b, first_senses=senses,
            scenarios=tuple(scenarios),
        )
    except ValueError as e:
        raise ProblemFormatError(str(e), "$") from None


def _fmt_matrix(mtx):
    return [[format_rational(x) for x in row] for row in mtx]


def problem_to_dict(rp: RecourseProblem) -> dict:
    return {
        "name": rp.name,
        "d": rp.d,
        "n": rp.n,
        "m": rp.m,
        "k": rp.k,
        "l": rp.l,
        "C": _fmt_matrix(rp.C),
        "A": _fmt_matrix(rp.A),
        "b": [format_rational(x) for x in rp.b],
        "first_stage_senses": list(rp.first_senses),
        "scenarios": [
            {
                "label": sc.label,
                "p": format_rational(sc.p),
                "Q": _fmt_matrix(sc.Q),
                "T": _fmt_matrix(sc.T),
                "W": _fmt_matrix(sc.W),
                "u": [format_rational(x) for x in sc.u],
                "senses": list(sc.senses),
            }
            for sc in rp.scenarios
        ],
    }


def serialize_problem(rp: RecourseProblem, pretty=False) -> str:
    doc = problem_to_dict(rp)
    if pretty:
        return json.dumps(doc, indent=2, ensure_ascii=False)
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=False)


# ---------------------------------------------------------------------------
# Newsvendor generator


@dataclass(frozen=True)
class NewsType:
    name: str
    purchase: object
    sell: object
    returns: object  # per-piece refund for unsold copies


@dataclass(frozen=True)
class NewsvendorSpec:
    types: tuple
    day_labels: tuple
    demand: tuple  # rows: days, columns: types, positive integers
    capacity: int
    time_table: tuple = None  # optional override of 200/demand

    def __post_init__(self):
        if not self.types or not self.day_labels:
            raise ValueError("need at least one newspaper type and one day")
        for row in self.demand:
            if len(row) != len(self.types):
                raise ValueError("demand row width mismatch")
            if any(d <= 0 for d in row):
                raise ValueError("demands must be positive")
        if len(self.demand) != len(self.day_labels):
            raise ValueError("one demand row per day required")
        if self.capacity <= 0:
            raise ValueError("capacity must be positive")
        for t in self.types:
            if not (t.returns <= t.purchase < t.sell):
                warnings.warn(
                    f"type {t.name}: expected return <= purchase < sell",
                    stacklevel=2,
                )

    def selling_time(self, day_index, type_index):
        if self.time_table is not None:
            return Rat(self.time_table[day_index][type_index])
        return Rat(200) / Rat(self.demand[day_index][type_index])


def parse_prices_json(text: str) -> tuple:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProblemFormatError(f"invalid JSON: {e}", "$") from None
    raw = doc.get("types")
    if not raw:
        raise ProblemFormatError("missing or empty key 'types'", "$")
    types = []
    for i, t in enumerate(raw):
        path = f"$.types[{i}]"
        for key in ("name", "purchase", "sell", "return"):
            if key not in t:
                raise ProblemFormatError(f"missing key {key!r}", path)
        types.append(
            NewsType(
                name=t["name"],
                purchase=_rat_at(t["purchase"], f"{path}.purchase"),
                sell=_rat_at(t["sell"], f"{path}.sell"),
                returns=_rat_at(t["return"], f"{path}.return"),
            )
        )
    return tuple(types)


def parse_demand_csv(text: str):
    """Header row names the types; each following row is a day label plus
    one positive integer demand per type."""
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if row and any(c.strip() for c in row)]
    if len(rows) < 2:
        raise ProblemFormatError("need a header row and at least one day")
    header = [c.strip() for c in rows[0]]
    type_names = header[1:]
    if not type_names:
        raise ProblemFormatError("header row must name at least one type")
    labels = []
    demand = []
    for r, row in enumerate(rows[1:], start=1):
        cells = [c.strip() for c in row]
        if len(cells) != len(type_names) + 1:
            raise ProblemFormatError(
                f"row {r}: expected {len(type_names) + 1} cells, found {len(cells)}"
            )
        labels.append(cells[0])
        values = []
        for c, cell in enumerate(cells[1:], start=1):
            if not cell.lstrip("+").isdigit():
                raise ProblemFormatError(
                    f"row {r}, column {c}: {cell!r} is not a positive integer"
                )
            values.append(int(cell))
        if any(v <= 0 for v in values):
            raise ProblemFormatError(f"row {r}: demands must be positive")
        demand.append(tuple(values))
    return tuple(labels), tuple(type_names), tuple(demand)


def build_newsvendor(spec: NewsvendorSpec, demand_cap=False) -> RecourseProblem:
    """Bi-objective (loss, working time) newsvendor recourse problem.

    First stage buys x (capacity row), second stage sells 0 <= y <= x.
    The demand itself caps sales only when demand_cap is set; the base
    model prices demand solely through the selling-time rule.
    """
    n = len(spec.types)
    N = len(spec.day_labels)
    C = mat(
        [[t.purchase - t.returns for t in spec.types], [0] * n]
    )
    A = mat([[1] * n])
    b = vec([spec.capacity])
    scenarios = []
    for i, label in enumerate(spec.day_labels):
        Q = mat(
            [
                [t.returns - t.sell for t in spec.types],
                [spec.selling_time(i, j) for j in range(n)],
            ]
        )
        T_rows = [[-1 if jj == j else 0 for jj in range(n)] for j in range(n)]
        W_rows = [[1 if jj == j else 0 for jj in range(n)] for j in range(n)]
        u_vals = [0] * n
        senses = [LE] * n
        if demand_cap:
            for j in range(n):
                T_rows.append([0] * n)
                W_rows.append([1 if jj == j else 0 for jj in range(n)])
                u_vals.append(spec.demand[i][j])
                senses.append(LE)
        scenarios.append(
            Scenario(
                label=label,
                p=Rat(1, N),
                Q=Q,
                T=mat(T_rows),
                W=mat(W_rows),
                u=vec(u_vals),
                senses=tuple(senses),
            )
        )
    return RecourseProblem(
        name=f"newsvendor-{N}day" + ("-capped" if demand_cap else ""),
        C=C,
        A=A,
        b=b,
        first_senses=(LE,),
        scenarios=tuple(scenarios),
    )


# ---------------------------------------------------------------------------
# Result serialization


def upper_set_to_json(s: UpperSet) -> dict:
    out = poly_to_json(s)
    if not s.is_empty:
        # presentation mirror with the loss axis negated to gain
        out["gain_vertices"] = [
            [format_rational(-v[0])] + [format_rational(c) for c in v[1:]]
            for v in s.vertices
        ]
    return out


def set_solution_to_json(sol: SetSolution) -> dict:
    return {
        "entries": [
            {
                "x": [format_rational(c) for c in e.x],
                "flexibility": upper_set_to_json(e.outcomes),
                "minimality_certificate": [
                    {"facet": f, "margin": format_rational(margin)}
                    for f, margin in cert
                ],
            }
            for e, cert in zip(sol.entries, sol.minimality_certificates)
        ],
        "vertex_cover": [
            {"vertex": [format_rational(c) for c in v], "entry": idx}
            for v, idx in sol.vertex_cover
        ],
    }


def ws_to_json(ws) -> dict:
    return {
        "scenarios": [
            {"label": label, "upper_image": upper_set_to_json(img)}
            for label, img in ws.scenario_images
        ],
        "combined": upper_set_to_json(ws.combined),
    }


def evpi_to_json(region) -> dict:
    return {
        "v": [format_rational(c) for c in region.v],
        "region": poly_to_json(region.region),
    }


def dumps(doc, pretty=False) -> str:
    if pretty:
        return json.dumps(doc, indent=2, ensure_ascii=False)
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=False)
