#!/usr/bin/env python3
"""Render the standard newsvendor diagrams as SVG files.

Produces, for the 2-day and 3-day instances:
  * the upper image with the set solution's flexibility sets,
  * wait-and-see vs recourse images,
  * expected-value vs recourse images,
  * the EEV family of the reference expected-value solution.

Usage: python scripts/make_figures.py [outdir]
"""

import json
import pathlib
import sys

from recoflex.model_io import (
    NewsvendorSpec,
    build_newsvendor,
    parse_demand_csv,
    parse_prices_json,
)
from recoflex.rational import format_rational
from recoflex.recourse import recourse_upper_image, solve_set_problem
from recoflex.surrogates import eev_upper_image, ev_upper_image, wait_and_see
from recoflex.svg import View, export_svg

DATA = pathlib.Path(__file__).parent / "data"


def load(demand_file):
    types = parse_prices_json((DATA / "prices.json").read_text())
    labels, _, demand = parse_demand_csv((DATA / demand_file).read_text())
    spec = NewsvendorSpec(types=types, day_labels=labels, demand=demand,
                          capacity=200)
    return build_newsvendor(spec)


def label_x(x):
    return ",".join(str(format_rational(c)) for c in x)


def main():
    outdir = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "figures")
    outdir.mkdir(parents=True, exist_ok=True)
    for tag, demand_file in (("2day", "demand2.csv"), ("3day", "demand3.csv")):
        rp = load(demand_file)
        image = recourse_upper_image(rp).poly
        sol = solve_set_problem(rp)
        sets = [("upper image", image)] + [
            (f"F({label_x(e.x)})", e.outcomes) for e in sol.entries
        ]
        (outdir / f"solution-{tag}.svg").write_text(export_svg(sets))

        ws = wait_and_see(rp)
        (outdir / f"wait-and-see-{tag}.svg").write_text(
            export_svg([("wait-and-see", ws.combined), ("recourse", image)])
        )
        (outdir / f"expected-value-{tag}.svg").write_text(
            export_svg([("expected value", ev_upper_image(rp)),
                        ("recourse", image)])
        )
        eev_sets = [("recourse", image)]
        for x in ((0, 200), (75, 125), (200, 0)):
            eev_sets.append((f"EEV({label_x(x)})", eev_upper_image(rp, x)))
        (outdir / f"eev-family-{tag}.svg").write_text(export_svg(eev_sets))
        print(f"{tag}: wrote 4 figures to {outdir}/")


if __name__ == "__main__":
    main()
