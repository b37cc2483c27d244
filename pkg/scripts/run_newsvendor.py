#!/usr/bin/env python3
"""End-to-end newsvendor walkthrough on the command line.

Builds the 2-day instance, prints the upper image, the maximally
flexible first-stage decisions with their certificates, the surrogate
analyses and a sample EVPI query.  Serves as executable documentation of
the library API.
"""

import pathlib

from recoflex.model_io import (
    NewsvendorSpec,
    build_newsvendor,
    parse_demand_csv,
    parse_prices_json,
    serialize_problem,
)
from recoflex.rational import format_rational
from recoflex.recourse import (
    evaluate_F,
    recourse_upper_image,
    solve_set_problem,
    validate,
)
from recoflex.surrogates import evpi, inclusion_report, wait_and_see

DATA = pathlib.Path(__file__).parent / "data"


def fmt_vec(v):
    return "(" + ", ".join(str(format_rational(c)) for c in v) + ")"


def main():
    types = parse_prices_json((DATA / "prices.json").read_text())
    labels, _, demand = parse_demand_csv((DATA / "demand2.csv").read_text())
    rp = build_newsvendor(
        NewsvendorSpec(types=types, day_labels=labels, demand=demand,
                       capacity=200)
    )
    report = validate(rp)
    print(f"instance {rp.name}: validation {'ok' if report.ok else 'FAILED'}")

    ui = recourse_upper_image(rp)
    print("\nupper image vertices (loss, working time):")
    for v in ui.vertices:
        print("  ", fmt_vec(v))

    sol = solve_set_problem(rp)
    print("\nmaximally flexible first-stage decisions:")
    for entry, cert in zip(sol.entries, sol.minimality_certificates):
        worst = max((m for _, m in cert), default=0)
        print(
            f"  x = {fmt_vec(entry.x)}   flexibility vertices: "
            + ", ".join(fmt_vec(v) for v in entry.outcomes.vertices)
            + f"   (worst facet margin {format_rational(worst)})"
        )

    print("\ncomparison of two candidate purchases:")
    for x in ((100, 0), (100, 100)):
        fx = evaluate_F(rp, x)
        print(f"  F{fmt_vec(x)} vertices: "
              + ", ".join(fmt_vec(v) for v in fx.vertices))

    ws = wait_and_see(rp)
    print("\nwait-and-see vertices:",
          ", ".join(fmt_vec(v) for v in ws.combined.vertices))

    for v in ((-250, 100), (-550, "800/3")):
        from recoflex.rational import parse_rational

        vv = tuple(parse_rational(str(c)) for c in v)
        region = evpi(rp, vv)
        print(f"EVPI({fmt_vec(vv)}) vertices:",
              ", ".join(fmt_vec(u) for u in region.region.vertices))

    incl = inclusion_report(rp)
    print("\ninclusion report:")
    for rel in incl.relations:
        print(f"  {rel.name}: {'holds' if rel.holds else 'violated'}"
              + (f" (witness {fmt_vec(rel.witness)})" if rel.witness else ""))
    print(
        "  max gain: recourse", format_rational(incl.max_gain_recourse),
        "| EEV family", format_rational(incl.max_gain_eev_family),
        "| reached:", incl.max_gain_reached,
    )


if __name__ == "__main__":
    main()
