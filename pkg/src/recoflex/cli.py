"""Command-line front door.

Exit codes: 0 success, 1 usage error, 2 validation/parse failure,
3 solver failure (infeasible/unbounded/budget).  Failures emit a single
machine-readable JSON object on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from .model_io import (
    NewsvendorSpec,
    ProblemFormatError,
    build_newsvendor,
    dumps,
    evpi_to_json,
    parse_demand_csv,
    parse_prices_json,
    parse_problem,
    serialize_problem,
    set_solution_to_json,
    upper_set_to_json,
    ws_to_json,
)
from .molp import InfeasibleError, UnboundedError, solve_molp, upper_image
from .rational import RationalFormatError, format_rational, parse_rational
from .recourse import (
    BudgetExceeded,
    evaluate_F,
    recourse_upper_image,
    solve_set_problem,
    validate,
)
from .surrogates import (
    NotInUpperImage,
    ScenarioSolveError,
    averaged_problem,
    eev_upper_image,
    evpi,
    expected_value_problem,
    inclusion_report,
    solve_ev_star,
    wait_and_see,
)
from .svg import View, export_svg


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fail(code, kind, message, path=None):
    doc = {"code": kind, "message": message}
    if path:
        doc["path"] = path
    print(json.dumps(doc), file=sys.stderr)
    return code


def _load_problem(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    rp = parse_problem(text)
    report = validate(rp)
    if not report.ok:
        failures = "; ".join(f"{n} ({d})" if d else n for n, d in report.failures())
        raise ProblemFormatError(f"validation failed: {failures}", "$")
    return rp

def _parse_vector(text, what):
    try:
        return tuple(parse_rational(c) for c in text.split(","))
    except RationalFormatError as e:
        raise UsageError(f"bad {what}: {e}") from None


def _emit(doc, pretty):
    sys.stdout.write(dumps(doc, pretty=pretty) + "\n")


def cmd_solve(args):
    rp = _load_problem(args.file)
    sol = solve_set_problem(rp)
    _emit(set_solution_to_json(sol), args.pretty)
    if args.svg:
        image = recourse_upper_image(rp).poly
        sets = [("upper image", image)]
        for e in sol.entries:
            label = "F(x=" + ",".join(str(format_rational(c)) for c in e.x) + ")"
            sets.append((label, e.outcomes))
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(export_svg(sets, View(negate_axis_1=True)))
    return 0


def cmd_ws(args):
    rp = _load_problem(args.file)
    _emit(ws_to_json(wait_and_see(rp)), args.pretty)
    return 0


def cmd_ev(args):
    rp = _load_problem(args.file)
    molp = expected_value_problem(rp)
    ui = upper_image(molp)
    sol = solve_molp(molp)
    doc = {
        "upper_image": upper_set_to_json(ui.poly),
        "solution": [
            {
                "z": [format_rational(c) for c in z],
                "value": [format_rational(c) for c in v],
            }
            for z, v in sol.entries
        ],
    }
    _emit(doc, args.pretty)
    return 0


def cmd_ev_star(args):
    rp = _load_problem(args.file)
    _emit(set_solution_to_json(solve_ev_star(rp)), args.pretty)
    return 0


def cmd_eev(args):
    rp = _load_problem(args.file)
    x = _parse_vector(args.x, "--x")
    if len(x) != rp.n:
        raise UsageError(f"--x needs {rp.n} components")
    fx = eev_upper_image(rp, x)
    doc = upper_set_to_json(fx)
    if fx.is_empty:
        doc["note"] = "EEV infeasible for this first-stage choice"
    _emit(doc, args.pretty)
    return 0


def cmd_evpi(args):
    rp = _load_problem(args.file)
    v = _parse_vector(args.v, "--v")
    if len(v) != rp.d:
        raise UsageError(f"--v needs {rp.d} components")
    region = evpi(rp, v)
    _emit(evpi_to_json(region), args.pretty)
    return 0


def cmd_report(args):
    rp = _load_problem(args.file)
    _emit(inclusion_report(rp).to_json(), args.pretty)
    return 0


def cmd_newsvendor(args):
    with open(args.prices, "r", encoding="utf-8") as fh:
        types = parse_prices_json(fh.read())
    with open(args.demand, "r", encoding="utf-8") as fh:
        labels, names, demand = parse_demand_csv(fh.read())
    if list(names) != [t.name for t in types]:
        raise ProblemFormatError(
            f"demand columns {list(names)} do not match price types "
            f"{[t.name for t in types]}"
        )
    spec = NewsvendorSpec(
        types=types,
        day_labels=labels,
        demand=demand,
        capacity=args.capacity,
    )
    rp = build_newsvendor(spec, demand_cap=args.demand_cap)
    text = serialize_problem(rp, pretty=args.pretty)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    return 0


def cmd_serve(args):
    import uvicorn

    from .service import create_app

    app = create_app(seed=args.seed, state_dir=args.state_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="recoflex", description=__doc__)
    parser.add_argument("--pretty", action="store_true",
                        help="indent JSON output")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for service session randomness")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="set solution of the recourse problem")
    p.add_argument("file")
    p.add_argument("--svg", help="write an overlay figure to this path")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("ws", help="wait-and-see decomposition")
    p.add_argument("file")
    p.set_defaults(fn=cmd_ws)

    p = sub.add_parser("ev", help="expected value problem analysis")
    p.add_argument("file")
    p.set_defaults(fn=cmd_ev)

    p = sub.add_parser("ev-star", help="set solution of the expected value problem")
    p.add_argument("file")
    p.set_defaults(fn=cmd_ev_star)

    p = sub.add_parser("eev", help="expected outcome set of a fixed first stage")
    p.add_argument("file")
    p.add_argument("--x", required=True, help="comma-separated rationals")
    p.set_defaults(fn=cmd_eev)

    p = sub.add_parser("evpi", help="improvement set under perfect information")
    p.add_argument("file")
    p.add_argument("--v", required=True, help="comma-separated rationals")
    p.set_defaults(fn=cmd_evpi)

    p = sub.add_parser("report", help="surrogate inclusion report")
    p.add_argument("file")
    p.set_defaults(fn=cmd_report)

    p = sub.add_parser("newsvendor", help="generate a newsvendor problem file")
    p.add_argument("--prices", required=True)
    p.add_argument("--demand", required=True)
    p.add_argument("--capacity", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--demand-cap", action="store_true",
                   help="also cap sales by observed demand")
    p.set_defaults(fn=cmd_newsvendor)

    p = sub.add_parser("serve", help="run the decision service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--state-dir", help="write-through problem/session store")
    p.set_defaults(fn=cmd_serve)
    return parser


def _join_vector_options(argv):
    """Fold ["--v", "-250,100"] into ["--v=-250,100"] so leading minus
    signs in vector arguments survive argparse."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in ("--v", "--x") and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_join_vector_options(list(argv)))
    except UsageError as e:
        return _fail(1, "usage", str(e))
    try:
        return args.fn(args)
    except UsageError as e:
        return _fail(1, "usage", str(e))
    except ProblemFormatError as e:
        return _fail(2, "validation", e.reason, e.path)
    except NotInUpperImage as e:
        return _fail(2, "validation", str(e))
    except RationalFormatError as e:
        return _fail(2, "validation", str(e))
    except (InfeasibleError, UnboundedError, BudgetExceeded,
            ScenarioSolveError) as e:
        return _fail(3, "solver", str(e))
    except OSError as e:
        return _fail(1, "usage", str(e))


if __name__ == "__main__":
    sys.exit(main())
