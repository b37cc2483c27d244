"""HTTP decision service: endpoints, error codes, session state machine."""

import json

import pytest
from fastapi.testclient import TestClient

from recoflex.model_io import problem_to_dict
from recoflex.service import create_app


@pytest.fixture()
def client():
    return TestClient(create_app(seed=7))


@pytest.fixture()
def pid(client, nv2):
    res = client.post("/api/problems", json=problem_to_dict(nv2))
    assert res.status_code == 200, res.text
    return res.json()["id"]


class TestProblems:
    def test_post_validates(self, client):
        res = client.post("/api/problems", json={"d": 2})
        assert res.status_code == 422
        assert res.json()["code"] == "validation"

    def test_post_idempotent_by_content(self, client, nv2):
        doc = problem_to_dict(nv2)
        a = client.post("/api/problems", json=doc).json()["id"]
        b = client.post("/api/problems", json=doc).json()["id"]
        assert a == b

    def test_upper_image_memoized_byte_identical(self, client, pid):
        first = client.get(f"/api/problems/{pid}/upper-image")
        second = client.get(f"/api/problems/{pid}/upper-image")
        assert first.content == second.content
        doc = first.json()
        assert [-600, "1000/3"] in doc["vertices"]
        assert [600, "1000/3"] in doc["gain_vertices"]

    def test_solution_with_certificates(self, client, pid):
        doc = client.get(f"/api/problems/{pid}/solution").json()
        assert [e["x"] for e in doc["entries"]] == [[0, 200], [200, 0]]
        for entry in doc["entries"]:
            assert entry["minimality_certificate"]

    def test_flexibility_endpoint(self, client, pid):
        res = client.post(f"/api/problems/{pid}/f", json={"x": [100, 100]})
        doc = res.json()
        assert [-550, "800/3"] in doc["vertices"]
        res = client.post(f"/api/problems/{pid}/f", json={"x": [500, 0]})
        assert res.json() == {"empty": True, "dim": 2}

    def test_surrogates_endpoint(self, client, pid):
        doc = client.get(f"/api/problems/{pid}/surrogates").json()
        assert [-550, "700/3"] in doc["wait_and_see"]["combined"]["vertices"]
        rels = {r["relation"] for r in doc["inclusion_report"]["relations"]}
        assert "WS⊇RP" in rels

    def test_evpi_endpoint(self, client, pid):
        res = client.post(f"/api/problems/{pid}/evpi", json={"v": [-250, 100]})
        assert res.json()["region"]["vertices"] == [[0, 0]]
        res = client.post(f"/api/problems/{pid}/evpi", json={"v": [-9999, 0]})
        assert res.status_code == 404
        assert res.json()["code"] == "not_in_upper_image"

    def test_unknown_problem_404(self, client):
        assert client.get("/api/problems/zzz/upper-image").status_code == 404

    def test_status_reports_ready_keys(self, client, pid):
        client.get(f"/api/problems/{pid}/upper-image")
        doc = client.get(f"/api/problems/{pid}/status").json()
        assert "upper-image" in doc["ready"]


class TestSessions:
    def make_session(self, client, pid, seed=None):
        body = {} if seed is None else {"seed": seed}
        res = client.post(f"/api/problems/{pid}/sessions", json=body)
        assert res.status_code == 200
        return res.json()["id"]

    def test_happy_path_walkthrough(self, client, pid):
        sid = self.make_session(client, pid)
        res = client.post(
            f"/api/sessions/{sid}/first-stage", json={"x": [100, 100]}
        )
        assert res.json()["stage"] == "AwaitRealization"
        res = client.post(
            f"/api/sessions/{sid}/realize", json={"omega": "Tuesday"}
        )
        assert res.json()["stage"] == "AwaitSecondStage"
        frontier = client.get(f"/api/sessions/{sid}/second-stage").json()
        assert [-250, 100] in frontier["vertices"]
        res = client.post(f"/api/sessions/{sid}/choose", json={"y": [100, 0]})
        doc = res.json()
        assert doc["stage"] == "Done"
        assert doc["outcome"] == [-250, 100]
        assert doc["outcome_gain_convention"] == [250, 100]
        assert doc["outcome_minimal"] is True

    def test_infeasible_first_stage_rejected(self, client, pid):
        sid = self.make_session(client, pid)
        res = client.post(
            f"/api/sessions/{sid}/first-stage", json={"x": [300, 0]}
        )
        assert res.status_code == 422

    def test_choice_exceeding_stock_rejected(self, client, pid):
        sid = self.make_session(client, pid)
        client.post(f"/api/sessions/{sid}/first-stage", json={"x": [100, 100]})
        client.post(f"/api/sessions/{sid}/realize", json={"omega": "Tuesday"})
        res = client.post(f"/api/sessions/{sid}/choose", json={"y": [150, 0]})
        assert res.status_code == 422
        assert "exceeds" in res.json()["message"]

    def test_wrong_stage_conflict(self, client, pid):
        sid = self.make_session(client, pid)
        res = client.post(
            f"/api/sessions/{sid}/realize", json={"omega": "Monday"}
        )
        assert res.status_code == 409

    def test_seeded_random_realization_replays(self, client, nv2, pid):
        draws_a = []
        draws_b = []
        for draws in (draws_a, draws_b):
            for _ in range(6):
                sid = self.make_session(client, pid, seed=123)
                client.post(
                    f"/api/sessions/{sid}/first-stage", json={"x": [50, 50]}
                )
                res = client.post(
                    f"/api/sessions/{sid}/realize", json={"random": True}
                )
                draws.append(res.json()["omega"])
        assert draws_a == draws_b
        assert set(draws_a) <= {"Monday", "Tuesday"}

    def test_unknown_scenario_rejected(self, client, pid):
        sid = self.make_session(client, pid)
        client.post(f"/api/sessions/{sid}/first-stage", json={"x": [0, 0]})
        res = client.post(
            f"/api/sessions/{sid}/realize", json={"omega": "Sunday"}
        )
        assert res.status_code == 422


class TestStateDir:
    def test_write_through(self, tmp_path, nv2):
        client = TestClient(create_app(seed=1, state_dir=str(tmp_path)))
        res = client.post("/api/problems", json=problem_to_dict(nv2))
        pid = res.json()["id"]
        stored = json.loads((tmp_path / "problems" / f"{pid}.json").read_text())
        assert stored["name"] == "newsvendor-2day"
        sid = client.post(f"/api/problems/{pid}/sessions", json={}).json()["id"]
        assert (tmp_path / "sessions" / f"{sid}.json").exists()
