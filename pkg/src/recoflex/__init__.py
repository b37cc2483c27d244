"""recoflex: exact set-optimization solvers for two-stage multi-objective
stochastic linear programs with recourse.

The package computes upper images of the deterministic equivalent,
flexibility sets F(x) of first-stage decisions, maximally flexible set
solutions with exact minimality certificates, and the wait-and-see /
expected-value surrogate analyses, all in arbitrary-precision rational
arithmetic.  A CLI (recoflex) and an HTTP decision service expose the
same functionality.
"""

from .linalg import gauss_solve, mat, vec
from .molp import (
    InfeasibleError,
    Molp,
    MolpSolution,
    UnboundedError,
    UpperImage,
    is_minimal_point,
    minimizer_for_vertex,
    solve_molp,
    upper_image,
)
from .polyhedra import (
    HRep,
    Polyhedron,
    UpperSet,
    VRep,
    recession_cone_is_orthant,
    hat,
    hat_of_points,
    intersect,
    minkowski_sum,
    scale,
)
from .rational import Rat, format_rational, parse_rational
from .recourse import (
    FlexSet,
    RecourseProblem,
    Scenario,
    SetSolution,
    deterministic_equivalent,
    evaluate_F,
    expectation_identity_check,
    improve,
    recourse_upper_image,
    second_stage_upper_image,
    solve_set_problem,
    validate,
    validate_set_solution,
)
from .simplex import LpProblem, LpResult, solve_lp, solve_many
from .surrogates import (
    EvpiRegion,
    WsDecomposition,
    eev_upper_image,
    ev_upper_image,
    evpi,
    expected_value_problem,
    inclusion_report,
    solve_ev_star,
    wait_and_see,
)

__version__ = "0.1.0"
