import hypothesis
import pytest

from recoflex.linalg import mat, vec
from recoflex.molp import Molp
from recoflex.rational import Rat
from recoflex.recourse import RecourseProblem, Scenario
from recoflex.simplex import LE

hypothesis.settings.register_profile("default", deadline=None)
hypothesis.settings.load_profile("default")


def newsvendor_problem(days):
    """Two-type newsvendor recourse problem; days = list of
    (label, demand_jp, demand_bt), capacity 200, unit selling time
    200/demand."""
    C = mat([[2, 0], [0, 0]])
    A = mat([[1, 1]])
    b = vec([200])
    p = Rat(1, len(days))
    scenarios = []
    for label, d_jp, d_bt in days:
        scenarios.append(
            Scenario(
                label=label,
                p=p,
                Q=mat([[Rat(-9, 2), -3], [Rat(200, d_jp), Rat(200, d_bt)]]),
                T=mat([[-1, 0], [0, -1]]),
                W=mat([[1, 0], [0, 1]]),
                u=vec([0, 0]),
                senses=(LE, LE),
            )
        )
    return RecourseProblem(
        name=f"newsvendor-{len(days)}day",
        C=C,
        A=A,
        b=b,
        first_senses=(LE,),
        scenarios=tuple(scenarios),
    )


@pytest.fixture(scope="session")
def nv2():
    return newsvendor_problem(
        [("Monday", 200, 150), ("Tuesday", 200, 100)]
    )


@pytest.fixture(scope="session")
def nv3():
    return newsvendor_problem(
        [("Monday", 200, 150), ("Tuesday", 200, 100), ("Wednesday", 50, 220)]
    )


@pytest.fixture(scope="session")
def nv2_molp():
    """Six-variable deterministic equivalent of the two-day newsvendor
    instance: z = (x1, x2, y11, y12, y21, y22), objectives (loss, time)."""
    P = [
        [2, 0, Rat(-9, 4), Rat(-3, 2), Rat(-9, 4), Rat(-3, 2)],
        [0, 0, Rat(1, 2), Rat(2, 3), Rat(1, 2), 1],
    ]
    rows = [
        ((1, 1, 0, 0, 0, 0), LE, 200),
        ((-1, 0, 1, 0, 0, 0), LE, 0),
        ((0, -1, 0, 1, 0, 0), LE, 0),
        ((-1, 0, 0, 0, 1, 0), LE, 0),
        ((0, -1, 0, 0, 0, 1), LE, 0),
    ]
    return Molp.create(P, rows, lower=[0] * 6)


NV2_UPPER_VERTICES = (
    (Rat(-600), Rat(1000, 3)),
    (Rat(-500), Rat(200)),
    (Rat(0), Rat(0)),
)


def pytest_runtest_logreport(report):
    # One visible pass/fail line per acceptance criterion.
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        print(f"\n[ACCEPTANCE] {name}: {report.outcome.upper()}", flush=True)
