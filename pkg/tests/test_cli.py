"""CLI contract: subcommands, exit codes, error JSON, determinism."""

import json
import subprocess
import sys

import pytest

from recoflex.cli import main
from recoflex.model_io import serialize_problem

PRICES = json.dumps(
    {
        "types": [
            {"name": "JP", "purchase": 3, "sell": "11/2", "return": 1},
            {"name": "BT", "purchase": 2, "sell": 5, "return": 2},
        ]
    }
)
DEMAND = "day,JP,BT\nMonday,200,150\nTuesday,200,100\n"


@pytest.fixture()
def problem_file(tmp_path, nv2):
    path = tmp_path / "newsvendor2.json"
    path.write_text(serialize_problem(nv2, pretty=True))
    return str(path)


def run_main(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSolve:
    def test_solve_outputs_solution(self, capsys, problem_file):
        code, out, err = run_main(capsys, "solve", problem_file)
        assert code == 0 and not err
        doc = json.loads(out)
        xs = [entry["x"] for entry in doc["entries"]]
        assert xs == [[0, 200], [200, 0]]

    def test_solve_writes_svg(self, capsys, tmp_path, problem_file):
        svg_path = tmp_path / "fig.svg"
        code, out, _ = run_main(
            capsys, "solve", problem_file, "--svg", str(svg_path)
        )
        assert code == 0
        assert svg_path.read_text().startswith("<svg")

    def test_missing_file_is_usage_error(self, capsys):
        code, out, err = run_main(capsys, "solve", "missing.json")
        assert code == 1
        assert json.loads(err)["code"] == "usage"

    def test_invalid_document_exit_2(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"d": 2}')
        code, _, err = run_main(capsys, "solve", str(bad))
        assert code == 2
        assert json.loads(err)["code"] == "validation"


class TestAnalysisCommands:
    def test_ws(self, capsys, problem_file):
        code, out, _ = run_main(capsys, "ws", problem_file)
        assert code == 0
        doc = json.loads(out)
        assert [s["label"] for s in doc["scenarios"]] == ["Monday", "Tuesday"]
        assert [-550, "700/3"] not in doc["scenarios"][0]["upper_image"]["vertices"]
        assert [-550, "700/3"] in doc["combined"]["vertices"]

    def test_ev_and_ev_star(self, capsys, problem_file):
        code, out, _ = run_main(capsys, "ev", problem_file)
        assert code == 0
        assert "upper_image" in json.loads(out)
        code, out, _ = run_main(capsys, "ev-star", problem_file)
        assert code == 0
        assert json.loads(out)["entries"]

    def test_eev(self, capsys, problem_file):
        code, out, _ = run_main(capsys, "eev", problem_file, "--x", "0,200")
        assert code == 0
        doc = json.loads(out)
        assert [-600, "1000/3"] in doc["vertices"]

    def test_evpi_degenerate_region(self, capsys, problem_file):
        code, out, _ = run_main(
            capsys, "evpi", problem_file, "--v", "-250,100"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["region"]["vertices"] == [[0, 0]]

    def test_evpi_outside_image(self, capsys, problem_file):
        code, _, err = run_main(
            capsys, "evpi", problem_file, "--v", "-10000,0"
        )
        assert code == 2
        assert "upper image" in json.loads(err)["message"]

    def test_report(self, capsys, problem_file):
        code, out, _ = run_main(capsys, "report", problem_file)
        assert code == 0
        doc = json.loads(out)
        names = [r["relation"] for r in doc["relations"]]
        assert "WS⊇RP" in names and "EV⊇RP" in names
        assert doc["max_gain"]["recourse"] == 600


class TestNewsvendorCommand:
    def test_generates_problem_file(self, capsys, tmp_path, nv2):
        prices = tmp_path / "prices.json"
        prices.write_text(PRICES)
        demand = tmp_path / "demand.csv"
        demand.write_text(DEMAND)
        out_path = tmp_path / "problem.json"
        code, _, _ = run_main(
            capsys,
            "newsvendor",
            "--prices", str(prices),
            "--demand", str(demand),
            "--capacity", "200",
            "--out", str(out_path),
        )
        assert code == 0
        from recoflex.model_io import parse_problem

        assert parse_problem(out_path.read_text()) == nv2

    def test_usage_error_on_missing_flag(self, capsys):
        code, _, err = run_main(capsys, "newsvendor", "--capacity", "200")
        assert code == 1


class TestDeterminism:
    def test_repeat_runs_byte_identical(self, tmp_path, problem_file):
        env_runs = []
        svg_files = []
        for i in range(2):
            svg = tmp_path / f"fig{i}.svg"
            proc = subprocess.run(
                [sys.executable, "-m", "recoflex.cli", "solve", problem_file,
                 "--svg", str(svg)],
                capture_output=True,
            )
            assert proc.returncode == 0, proc.stderr
            env_runs.append(proc.stdout)
            svg_files.append(svg.read_bytes())
        assert env_runs[0] == env_runs[1]
        assert svg_files[0] == svg_files[1]

        for cmd in (["ws"], ["report"]):
            outs = [
                subprocess.run(
                    [sys.executable, "-m", "recoflex.cli", *cmd, problem_file],
                    capture_output=True,
                ).stdout
                for _ in range(2)
            ]
            assert outs[0] == outs[1]
