#!/usr/bin/env python3
"""Freeze decision-service responses as fixtures for the cockpit tests.

The cockpit's snapshot suite byte-compares every rendered polygon's
generator list against these recordings, keeping the UI mathematically
inert.  Rerun after any solver change and commit the diff.
"""

import json
import pathlib

from fastapi.testclient import TestClient

from recoflex.model_io import (
    NewsvendorSpec,
    build_newsvendor,
    parse_demand_csv,
    parse_prices_json,
    problem_to_dict,
)
from recoflex.service import create_app

DATA = pathlib.Path(__file__).parent / "data"
OUT = pathlib.Path(__file__).parent.parent / "frontend" / "test" / "fixtures"


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    types = parse_prices_json((DATA / "prices.json").read_text())
    labels, _, demand = parse_demand_csv((DATA / "demand2.csv").read_text())
    rp = build_newsvendor(
        NewsvendorSpec(types=types, day_labels=labels, demand=demand,
                       capacity=200)
    )
    client = TestClient(create_app(seed=7))

    def save(name, doc):
        (OUT / f"{name}.json").write_text(
            json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
        )
        print("wrote", name)

    pid = client.post("/api/problems", json=problem_to_dict(rp)).json()["id"]
    save("problem-post", {"id": pid})
    save("upper-image", client.get(f"/api/problems/{pid}/upper-image").json())
    save("solution", client.get(f"/api/problems/{pid}/solution").json())
    save(
        "f-100-100",
        client.post(f"/api/problems/{pid}/f", json={"x": [100, 100]}).json(),
    )
    save("surrogates", client.get(f"/api/problems/{pid}/surrogates").json())
    save(
        "evpi-250-100",
        client.post(f"/api/problems/{pid}/evpi", json={"v": [-250, 100]}).json(),
    )
    save(
        "evpi-550",
        client.post(
            f"/api/problems/{pid}/evpi", json={"v": [-550, "800/3"]}
        ).json(),
    )

    sid = client.post(f"/api/problems/{pid}/sessions", json={"seed": 7}).json()
    save("session-created", sid)
    sid = sid["id"]
    save(
        "session-first-stage",
        client.post(
            f"/api/sessions/{sid}/first-stage", json={"x": [100, 100]}
        ).json(),
    )
    save(
        "session-realize",
        client.post(
            f"/api/sessions/{sid}/realize", json={"omega": "Tuesday"}
        ).json(),
    )
    save(
        "session-second-stage",
        client.get(f"/api/sessions/{sid}/second-stage").json(),
    )
    save(
        "session-choose",
        client.post(f"/api/sessions/{sid}/choose", json={"y": [100, 0]}).json(),
    )


if __name__ == "__main__":
    main()
