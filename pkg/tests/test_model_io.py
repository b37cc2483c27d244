"""Problem documents, newsvendor generator, CSV ingestion, SVG output."""

import json

import pytest

from recoflex.linalg import vec
from recoflex.model_io import (
    NewsType,
    NewsvendorSpec,
    ProblemFormatError,
    build_newsvendor,
    parse_demand_csv,
    parse_prices_json,
    parse_problem,
    serialize_problem,
)
from recoflex.polyhedra import hat_of_points
from recoflex.rational import Rat
from recoflex.recourse import recourse_upper_image, validate
from recoflex.svg import View, export_svg

PRICES = {
    "types": [
        {"name": "JP", "purchase": 3, "sell": "11/2", "return": 1},
        {"name": "BT", "purchase": 2, "sell": 5, "return": 2},
    ]
}
DEMAND2 = "day,JP,BT\nMonday,200,150\nTuesday,200,100\n"
DEMAND3 = "day,JP,BT\nMonday,200,150\nTuesday,200,100\nWednesday,50,220\n"


def two_day_spec():
    types = parse_prices_json(json.dumps(PRICES))
    labels, names, demand = parse_demand_csv(DEMAND2)
    return NewsvendorSpec(types=types, day_labels=labels, demand=demand,
                          capacity=200)


class TestNewsvendorBuilder:
    def test_matches_reference_instance(self, nv2):
        built = build_newsvendor(two_day_spec())
        assert built == nv2

    def test_blocks(self):
        rp = build_newsvendor(two_day_spec())
        assert rp.C == ((Rat(2), Rat(0)), (Rat(0), Rat(0)))
        assert rp.scenarios[0].Q == (
            (Rat(-9, 2), Rat(-3)), (Rat(1), Rat(4, 3))
        )
        assert rp.scenarios[1].Q == ((Rat(-9, 2), Rat(-3)), (Rat(1), Rat(2)))

    def test_three_day_time_row(self):
        types = parse_prices_json(json.dumps(PRICES))
        labels, _, demand = parse_demand_csv(DEMAND3)
        rp = build_newsvendor(
            NewsvendorSpec(types=types, day_labels=labels, demand=demand,
                           capacity=200)
        )
        assert rp.N == 3
        assert rp.scenarios[2].Q[1] == (Rat(4), Rat(10, 11))

    def test_demand_cap_variant(self):
        rp = build_newsvendor(two_day_spec(), demand_cap=True)
        assert rp.l == 4  # y <= x rows plus y <= demand rows
        assert rp.scenarios[0].u == vec((0, 0, 200, 150))
        assert validate(rp).ok

    def test_single_type_single_day(self):
        spec = NewsvendorSpec(
            types=(NewsType("only", Rat(2), Rat(3), Rat(1)),),
            day_labels=("Mon",),
            demand=((100,),),
            capacity=50,
        )
        rp = build_newsvendor(spec)
        assert (rp.n, rp.m, rp.N) == (1, 1, 1)

    def test_price_sanity_warns_not_raises(self):
        with pytest.warns(UserWarning):
            NewsvendorSpec(
                types=(NewsType("odd", Rat(1), Rat(3), Rat(2)),),
                day_labels=("Mon",),
                demand=((10,),),
                capacity=5,
            )


class TestDemandCsv:
    def test_two_day_table(self):
        labels, names, demand = parse_demand_csv(DEMAND2)
        assert labels == ("Monday", "Tuesday")
        assert names == ("JP", "BT")
        assert demand == ((200, 150), (200, 100))

    def test_three_day_adds_row(self):
        _, _, demand = parse_demand_csv(DEMAND3)
        assert demand[2] == (50, 220)

    def test_bad_cell_reports_position(self):
        with pytest.raises(ProblemFormatError, match="row 2, column 1"):
            parse_demand_csv("day,JP\nMonday,200\nTuesday,abc\n")

    def test_ragged_rows(self):
        with pytest.raises(ProblemFormatError, match="expected 3 cells"):
            parse_demand_csv("day,JP,BT\nMonday,200\n")


class TestProblemDocuments:
    def test_roundtrip_identity(self, nv2, nv3):
        for rp in (nv2, nv3):
            text = serialize_problem(rp)
            again = parse_problem(text)
            assert again == rp
            assert serialize_problem(again) == text

    def test_minimal_single_scenario_document(self):
        doc = {
            "name": "tiny",
            "d": 1, "n": 1, "m": 1, "k": 1, "l": 1,
            "C": [[1]],
            "A": [[1]],
            "b": [5],
            "first_stage_senses": ["<="],
            "scenarios": [
                {"label": "only", "p": 1, "Q": [[-1]], "T": [[-1]],
                 "W": [[1]], "u": [0], "senses": ["<="]}
            ],
        }
        rp = parse_problem(json.dumps(doc))
        assert rp.N == 1 and validate(rp).ok

    def test_probability_sum_error(self, nv2):
        doc = json.loads(serialize_problem(nv2))
        doc["scenarios"][0]["p"] = "1/2"
        doc["scenarios"][1]["p"] = "1/3"
        with pytest.raises(ProblemFormatError, match="5/6"):
            parse_problem(json.dumps(doc))

    def test_decimal_rejected_with_path(self, nv2):
        doc = json.loads(serialize_problem(nv2))
        doc["C"][0][0] = "3.5"
        with pytest.raises(ProblemFormatError) as e:
            parse_problem(json.dumps(doc))
        assert e.value.path == "$.C[0][0]"

    def test_missing_key_path(self, nv2):
        doc = json.loads(serialize_problem(nv2))
        del doc["scenarios"][1]["W"]
        with pytest.raises(ProblemFormatError) as e:
            parse_problem(json.dumps(doc))
        assert "W" in str(e.value)

    def test_dimension_mismatch(self, nv2):
        doc = json.loads(serialize_problem(nv2))
        doc["scenarios"][0]["Q"] = [[1]]
        with pytest.raises(ProblemFormatError) as e:
            parse_problem(json.dumps(doc))
        assert "scenarios[0]" in e.value.path


class TestSvg:
    def test_upper_image_renders(self, nv2):
        image = recourse_upper_image(nv2).poly
        text = export_svg([("upper image", image)])
        assert text.startswith("<svg")
        assert text.count("<circle") == 3  # one dot per vertex
        assert "gain (€)" in text and "work time (minutes)" in text

    def test_byte_stable(self, nv2):
        image = recourse_upper_image(nv2).poly
        sets = [("upper image", image)]
        assert export_svg(sets) == export_svg(sets)

    def test_requires_two_objectives(self):
        three = hat_of_points([(0, 0, 0)])
        with pytest.raises(ValueError, match="two objectives"):
            export_svg([("set", three)])

    def test_empty_list_rejected(self):
        with pytest.raises(ValueError):
            export_svg([])

    def test_axis_labels_without_negation(self, nv2):
        image = recourse_upper_image(nv2).poly
        text = export_svg(
            [("upper image", image)], View(negate_axis_1=False)
        )
        assert "objective 1" in text
