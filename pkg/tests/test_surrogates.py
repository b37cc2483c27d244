"""Wait-and-see, EVPI, expected value problem and inclusion relations."""

import random

import pytest

from recoflex.linalg import dot, mat_vec, vadd, vec, vscale
from recoflex.molp import solve_molp, upper_image
from recoflex.polyhedra import hat_of_points
from recoflex.rational import Rat, ZERO
from recoflex.recourse import (
    deterministic_equivalent,
    evaluate_F,
    recourse_upper_image,
    solve_set_problem,
    split_decision,
)
from recoflex.simplex import LE
from recoflex.surrogates import (
    ScenarioSolveError,
    averaged_problem,
    eev_upper_image,
    ev_upper_image,
    evpi,
    expected_value_problem,
    inclusion_report,
    solve_ev_star,
    validate_ev_star_solution,
    wait_and_see,
    wait_and_see_monolithic,
)

from .conftest import newsvendor_problem
from .generators import random_recourse_problem
from .oracles import minkowski_frontier_2d


class TestWaitAndSee:
    def test_scenario_images(self, nv2):
        ws = wait_and_see(nv2)
        monday = ws.scenario_image("Monday")
        assert set(monday.vertices) == {
            vec((0, 0)), vec((-500, 200)), vec((-600, Rat(800, 3)))
        }
        tuesday = ws.scenario_image("Tuesday")
        assert set(tuesday.vertices) == {
            vec((0, 0)), vec((-500, 200)), vec((-600, 400))
        }

    def test_combined_matches_slope_merge_oracle(self, nv2):
        ws = wait_and_see(nv2)
        expected = {
            vec((0, 0)),
            vec((-500, 200)),
            vec((-550, Rat(700, 3))),
            vec((-600, Rat(1000, 3))),
        }
        assert set(ws.combined.vertices) == expected
        oracle = minkowski_frontier_2d(
            ws.scenario_image("Monday").vertices,
            ws.scenario_image("Tuesday").vertices,
            Rat(1, 2),
            Rat(1, 2),
        )
        assert set(oracle) == expected

    def test_contains_recourse_image_strictly(self, nv2):
        ws = wait_and_see(nv2).combined
        rp_image = recourse_upper_image(nv2).poly
        assert ws.contains_set(rp_image)
        assert not rp_image.contains_set(ws)
        assert not rp_image.contains_point((-550, Rat(700, 3)))

    def test_single_scenario_equals_recourse(self):
        single = newsvendor_problem([("Monday", 200, 150)])
        ws = wait_and_see(single)
        assert ws.combined == recourse_upper_image(single).poly

    def test_identical_scenarios_average_to_one(self):
        twice = newsvendor_problem([("a", 200, 150), ("b", 200, 150)])
        ws = wait_and_see(twice)
        assert ws.combined == ws.scenario_image("a")

    def test_monolithic_equals_decomposed(self, nv2, nv3):
        for rp in (nv2, nv3):
            assert wait_and_see_monolithic(rp) == wait_and_see(rp).combined

    def test_infeasible_scenario_named(self, nv2):
        sc = nv2.scenarios[0]
        broken = nv2.__class__(
            name="broken", C=nv2.C, A=nv2.A, b=nv2.b,
            first_senses=nv2.first_senses,
            scenarios=(
                sc.__class__(
                    label="Monday", p=Rat(1), Q=sc.Q, T=sc.T,
                    W=((0, 0), (0, 0)), u=(-1, 0), senses=(">=", LE),
                ),
            ),
        )
        with pytest.raises(ScenarioSolveError) as e:
            wait_and_see(broken)
        assert e.value.label == "Monday"


class TestEvpi:
    def test_scenario_independent_outcome_has_no_improvement(self, nv2):
        region = evpi(nv2, (-250, 100)).region
        assert region.vertices == (vec((0, 0)),)
        assert region.rays == ()

    def test_improvement_at_mixed_outcome(self, nv2):
        region = evpi(nv2, (-550, Rat(800, 3))).region
        assert region.contains_point((0, Rat(100, 3)))

    def test_zero_always_in_region_inside_ws(self, nv2):
        ws = wait_and_see(nv2).combined
        for v in recourse_upper_image(nv2).vertices:
            assert ws.contains_point(v)
            region = evpi(nv2, v).region
            assert region.contains_point((0, 0))

    def test_outside_upper_image_rejected(self, nv2):
        with pytest.raises(ValueError):
            evpi(nv2, (-601, Rat(1000, 3)))


class TestExpectedValueProblem:
    def test_time_row_is_mean(self, nv2):
        molp = expected_value_problem(nv2)
        # E[Q] columns sit after the first-stage block
        assert molp.objective[1][2:] == (Rat(1), Rat(5, 3))
        assert molp.objective[0][2:] == (Rat(-9, 2), Rat(-3))

    def test_size_independent_of_scenario_count(self, nv2, nv3):
        m2 = expected_value_problem(nv2)
        m3 = expected_value_problem(nv3)
        assert m2.q == m3.q == nv2.n + nv2.m
        assert len(m2.rows) == len(m3.rows)

    def test_constant_data_equals_ws_scenario(self):
        twice = newsvendor_problem([("a", 200, 150), ("b", 200, 150)])
        ev_img = ev_upper_image(twice)
        assert ev_img == wait_and_see(twice).scenario_image("a")

    def test_ev_star_reference_solution(self, nv2):
        report = validate_ev_star_solution(
            nv2, [(200, 0), (0, 200), (75, 125)]
        )
        assert report.valid, report.failures()

    def test_ev_star_own_output_valid(self, nv2):
        sol = solve_ev_star(nv2)
        report = validate_ev_star_solution(nv2, [e.x for e in sol.entries])
        assert report.valid

    def test_ev_star_constant_data_reduces(self):
        twice = newsvendor_problem([("a", 200, 150), ("b", 200, 150)])
        single = newsvendor_problem([("a", 200, 150)])
        sol_avg = solve_ev_star(twice)
        sol_single = solve_set_problem(single)
        assert [e.x for e in sol_avg.entries] == [
            e.x for e in sol_single.entries
        ]


class TestEev:
    def test_bt_only_decision(self, nv2):
        fx = eev_upper_image(nv2, (0, 200))
        assert set(fx.vertices) == {
            vec((0, 0)), vec((-300, Rat(400, 3))), vec((-600, Rat(1000, 3)))
        }

    def test_interior_decision_contained(self, nv2):
        fx = eev_upper_image(nv2, (75, 125))
        assert not fx.is_empty
        assert recourse_upper_image(nv2).poly.contains_set(fx)

    def test_infeasible_flagged_empty(self, nv2):
        sc = nv2.scenarios[0]
        rigged = nv2.__class__(
            name="rigged", C=nv2.C, A=nv2.A, b=nv2.b,
            first_senses=nv2.first_senses,
            scenarios=(
                sc.__class__(
                    label="Monday", p=Rat(1), Q=sc.Q,
                    T=((1, 0), (0, 0)), W=((0, 0), (0, 1)),
                    u=(0, 0), senses=(LE, LE),
                ),
            ),
        )
        assert eev_upper_image(rigged, (5, 0)).is_empty


class TestInclusionReport:
    def test_two_day_report(self, nv2):
        report = inclusion_report(nv2)
        rel = {r.name: r for r in report.relations}
        assert rel["WS⊇RP"].holds
        # on the two-day data the EV image happens to coincide
        assert rel["EV⊇RP"].holds
        assert report.max_gain_recourse == 600
        assert report.max_gain_reached is True
        js = report.to_json()
        assert js["max_gain"]["recourse"] == 600

    def test_three_day_violation_with_witness(self, nv3):
        report = inclusion_report(nv3)
        rel = {r.name: r for r in report.relations}
        assert rel["WS⊇RP"].holds
        ev_rel = rel["EV⊇RP"]
        assert not ev_rel.holds
        witness = ev_rel.witness
        rp_image = recourse_upper_image(nv3).poly
        assert rp_image.contains_point(witness)
        assert not ev_upper_image(nv3).contains_point(witness)

    def test_supplied_decisions(self, nv2):
        report = inclusion_report(nv2, [(200, 0), (0, 200), (75, 125)])
        names = [r.name for r in report.relations]
        assert sum(1 for n in names if n.startswith("RP⊇EEV")) == 3
        assert report.max_gain_reached is True


class TestRandomInclusions:
    def test_ws_contains_rp_always(self):
        rng = random.Random(5000)
        for _ in range(10):
            rp = random_recourse_problem(rng)
            assert wait_and_see(rp).combined.contains_set(
                recourse_upper_image(rp).poly
            )

    def test_ev_contains_rp_with_constant_blocks(self):
        rng = random.Random(6000)
        for _ in range(10):
            rp = random_recourse_problem(rng, constant_QW=True)
            assert ev_upper_image(rp).contains_set(
                recourse_upper_image(rp).poly
            )

    def test_averaging_map_preserves_feasibility_and_value(self):
        # feasible (x, y_1..y_N) --> (x, sum p_i y_i) is feasible for the
        # averaged problem with equal objective value when Q, W constant
        rng = random.Random(7000)
        for _ in range(8):
            rp = random_recourse_problem(rng, constant_QW=True)
            molp = deterministic_equivalent(rp)
            for z, value in solve_molp(molp).entries:
                x, ys = split_decision(rp, z)
                ybar = tuple(
                    sum((sc.p * y[j] for sc, y in zip(rp.scenarios, ys)), ZERO)
                    for j in range(rp.m)
                )
                ev = expected_value_problem(rp)
                point = x + ybar
                for coeffs, sense, rhs in ev.rows:
                    lhs = dot(coeffs, point)
                    assert lhs <= rhs if sense == LE else lhs == rhs
                assert mat_vec(ev.objective, point) == value

    def test_eev_always_inside_rp(self):
        rng = random.Random(8000)
        for _ in range(8):
            rp = random_recourse_problem(rng)
            image = recourse_upper_image(rp).poly
            for e in solve_set_problem(rp).entries:
                assert image.contains_set(e.outcomes)
