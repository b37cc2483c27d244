"""HTTP JSON API exposing solver results and two-stage decision sessions.

Problems are registered once (idempotent by content) and their analyses
are memoized per handle with single-flight locking, so repeated GETs
return byte-identical bodies.  Sessions walk the two-stage decision
loop: commit a first-stage x, realize a scenario (user-forced or drawn
with the exact scenario probabilities from a seeded generator), inspect
the realized second-stage frontier, then commit a second-stage y.

State lives in process memory; an optional state directory receives a
JSON write-through of problems and sessions for convenience.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import threading
from dataclasses import dataclass, field
from functools import reduce

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .linalg import dot, mat_vec, vadd
from .model_io import (
    ProblemFormatError,
    evpi_to_json,
    problem_from_dict,
    problem_to_dict,
    set_solution_to_json,
    upper_set_to_json,
    ws_to_json,
)
from .molp import minimal_in
from .polyhedra import poly_to_json
from .rational import Rat, RationalFormatError, format_rational, parse_rational
from .recourse import (
    first_stage_feasible,
    evaluate_F,
    recourse_upper_image,
    second_stage_upper_image,
    solve_set_problem,
    validate,
)
from .simplex import EQ, GE, LE
from .surrogates import (
    NotInUpperImage,
    ev_upper_image,
    evpi,
    inclusion_report,
    wait_and_see,
)

AWAIT_FIRST_STAGE = "AwaitFirstStage"
AWAIT_REALIZATION = "AwaitRealization"
AWAIT_SECOND_STAGE = "AwaitSecondStage"
DONE = "Done"


class ApiError(Exception):
    def __init__(self, status, code, message, path=None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.path = path


@dataclass
class ProblemHandle:
    id: str
    problem: object
    _results: dict = field(default_factory=dict)
    _locks: dict = field(default_factory=dict)
    _guard: threading.Lock = field(default_factory=threading.Lock)

    def analysis(self, key, compute):
        """Memoized analysis with single-flight per key: one thread
        computes, concurrent readers wait on the same lock."""
        with self._guard:
            if key in self._results:
                return self._results[key]
            lock = self._locks.setdefault(key, threading.Lock())
        with lock:
            with self._guard:
                if key in self._results:
                    return self._results[key]
            value = compute()
            with self._guard:
                self._results[key] = value
            return value

    def ready_keys(self):
        with self._guard:
            return sorted(self._results)


@dataclass
class Session:
    id: str
    problem_id: str
    seed: int
    stage: str = AWAIT_FIRST_STAGE
    x: tuple = None
    omega: str = None
    y: tuple = None
    outcome: tuple = None
    draws: int = 0

    def to_json(self):
        doc = {
            "id": self.id,
            "problem_id": self.problem_id,
            "stage": self.stage,
            "seed": self.seed,
        }
        if self.x is not None:
            doc["x"] = [format_rational(c) for c in self.x]
        if self.omega is not None:
            doc["omega"] = self.omega
        if self.y is not None:
            doc["y"] = [format_rational(c) for c in self.y]
        if self.outcome is not None:
            doc["outcome"] = [format_rational(c) for c in self.outcome]
            doc["outcome_gain_convention"] = [
                format_rational(-self.outcome[0])
            ] + [format_rational(c) for c in self.outcome[1:]]
        return doc


def _parse_vector(body, key, length, what):
    raw = body.get(key)
    if raw is None or not isinstance(raw, list) or len(raw) != length:
        raise ApiError(400, "malformed", f"{what} must be a list of {length} rationals", key)
    try:
        return tuple(parse_rational(c) for c in raw)
    except RationalFormatError as e:
        raise ApiError(400, "malformed", str(e), key) from None


def create_app(seed: int = 0, state_dir: str = None) -> FastAPI:
    app = FastAPI(title="recoflex decision service", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    problems: dict = {}
    sessions: dict = {}
    state = {"problem_seq": 0, "session_seq": 0, "seed": seed}
    registry_lock = threading.Lock()

    def persist(kind, obj_id, doc):
        if not state_dir:
            return
        os.makedirs(os.path.join(state_dir, kind), exist_ok=True)
        path = os.path.join(state_dir, kind, f"{obj_id}.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)

    def get_problem(pid) -> ProblemHandle:
        handle = problems.get(pid)
        if handle is None:
            raise ApiError(404, "unknown_id", f"no problem {pid!r}")
        return handle

    def get_session(sid) -> Session:
        sess = sessions.get(sid)
        if sess is None:
            raise ApiError(404, "unknown_id", f"no session {sid!r}")
        return sess

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        doc = {"code": exc.code, "message": exc.message}
        if exc.path:
            doc["path"] = exc.path
        return JSONResponse(status_code=exc.status, content=doc)

    @app.post("/api/problems")
    async def post_problem(request: Request):
        try:
            body = await request.json()
        except Exception:
            raise ApiError(400, "malformed", "request body is not JSON")
        try:
            rp = problem_from_dict(body)
        except ProblemFormatError as e:
            raise ApiError(422, "validation", e.reason, e.path)
        report = validate(rp)
        if not report.ok:
            name, detail = report.failures()[0]
            raise ApiError(422, "validation", f"{name}: {detail}".rstrip(": "))
        digest = hashlib.sha256(
            json.dumps(problem_to_dict(rp), sort_keys=True).encode()
        ).hexdigest()[:12]
        with registry_lock:
            for handle in problems.values():
                if handle.id.endswith(digest):
                    return {"id": handle.id}
            state["problem_seq"] += 1
            pid = f"p{state['problem_seq']}-{digest}"
            problems[pid] = ProblemHandle(pid, rp)
        persist("problems", pid, problem_to_dict(rp))
        return {"id": pid}

    @app.get("/api/problems/{pid}/status")
    async def problem_status(pid: str):
        handle = get_problem(pid)
        return {"id": pid, "ready": handle.ready_keys()}

    @app.get("/api/problems/{pid}/upper-image")
    async def problem_upper_image(pid: str):
        handle = get_problem(pid)
        return handle.analysis(
            "upper-image",
            lambda: upper_set_to_json(recourse_upper_image(handle.problem).poly),
        )

    @app.get("/api/problems/{pid}/solution")
    async def problem_solution(pid: str):
        handle = get_problem(pid)
        return handle.analysis(
            "solution",
            lambda: set_solution_to_json(solve_set_problem(handle.problem)),
        )

    @app.post("/api/problems/{pid}/f")
    async def problem_flexibility(pid: str, request: Request):
        handle = get_problem(pid)
        body = await request.json()
        x = _parse_vector(body, "x", handle.problem.n, "x")
        fx = evaluate_F(handle.problem, x)
        if fx.is_empty:
            return {"empty": True, "dim": handle.problem.d}
        return upper_set_to_json(fx)

    @app.get("/api/problems/{pid}/surrogates")
    async def problem_surrogates(pid: str):
        handle = get_problem(pid)

        def compute():
            rp = handle.problem
            return {
                "wait_and_see": ws_to_json(wait_and_see(rp)),
                "expected_value_upper_image": upper_set_to_json(
                    ev_upper_image(rp)
                ),
                "inclusion_report": inclusion_report(rp).to_json(),
            }

        return handle.analysis("surrogates", compute)

    @app.post("/api/problems/{pid}/evpi")
    async def problem_evpi(pid: str, request: Request):
        handle = get_problem(pid)
        body = await request.json()
        v = _parse_vector(body, "v", handle.problem.d, "v")
        try:
            region = evpi(handle.problem, v)
        except NotInUpperImage as e:
            raise ApiError(404, "not_in_upper_image", str(e), "v")
        return evpi_to_json(region)

    @app.post("/api/problems/{pid}/sessions")
    async def create_session(pid: str, request: Request):
        handle = get_problem(pid)
        try:
            body = await request.json()
        except Exception:
            body = {}
        with registry_lock:
            state["session_seq"] += 1
            sid = f"s{state['session_seq']}"
        sess = Session(
            id=sid,
            problem_id=handle.id,
            seed=int(body.get("seed", state["seed"])),
        )
        sessions[sid] = sess
        persist("sessions", sid, sess.to_json())
        return sess.to_json()

    @app.get("/api/sessions/{sid}")
    async def session_state(sid: str):
        return get_session(sid).to_json()

    @app.post("/api/sessions/{sid}/first-stage")
    async def session_first_stage(sid: str, request: Request):
        sess = get_session(sid)
        if sess.stage != AWAIT_FIRST_STAGE:
            raise ApiError(409, "wrong_stage", f"session is in {sess.stage}")
        handle = get_problem(sess.problem_id)
        body = await request.json()
        x = _parse_vector(body, "x", handle.problem.n, "x")
        if not first_stage_feasible(handle.problem, x):
            raise ApiError(422, "infeasible", "x violates the first stage", "x")
        if evaluate_F(handle.problem, x).is_empty:
            raise ApiError(
                422, "infeasible", "x admits no recourse in some scenario", "x"
            )
        sess.x = x
        sess.stage = AWAIT_REALIZATION
        persist("sessions", sid, sess.to_json())
        return sess.to_json()

    @app.post("/api/sessions/{sid}/realize")
    async def session_realize(sid: str, request: Request):
        sess = get_session(sid)
        if sess.stage != AWAIT_REALIZATION:
            raise ApiError(409, "wrong_stage", f"session is in {sess.stage}")
        handle = get_problem(sess.problem_id)
        rp = handle.problem
        body = await request.json()
        if body.get("random"):
            # exact draw: common denominator lattice, seeded, replayable
            denom = reduce(
                lambda acc, sc: acc * int(sc.p.denominator) // _gcd(acc, int(sc.p.denominator)),
                rp.scenarios,
                1,
            )
            rng = random.Random(sess.seed * 1_000_003 + sess.draws)
            sess.draws += 1
            ticket = rng.randrange(denom)
            acc = 0
            omega = rp.scenarios[-1].label
            for sc in rp.scenarios:
                acc += int(sc.p * denom)
                if ticket < acc:
                    omega = sc.label
                    break
        else:
            omega = body.get("omega")
            if omega is None:
                raise ApiError(
                    400, "malformed", "need 'omega' or 'random': true"
                )
            try:
                rp.scenario(omega)
            except KeyError:
                raise ApiError(422, "validation", f"unknown scenario {omega!r}", "omega")
        sess.omega = omega
        sess.stage = AWAIT_SECOND_STAGE
        persist("sessions", sid, sess.to_json())
        return sess.to_json()

    @app.get("/api/sessions/{sid}/second-stage")
    async def session_second_stage(sid: str):
        sess = get_session(sid)
        if sess.stage not in (AWAIT_SECOND_STAGE, DONE):
            raise ApiError(409, "wrong_stage", f"session is in {sess.stage}")
        handle = get_problem(sess.problem_id)
        img = second_stage_upper_image(handle.problem, sess.x, sess.omega)
        doc = upper_set_to_json(img)
        return doc

    @app.post("/api/sessions/{sid}/choose")
    async def session_choose(sid: str, request: Request):
        sess = get_session(sid)
        if sess.stage != AWAIT_SECOND_STAGE:
            raise ApiError(409, "wrong_stage", f"session is in {sess.stage}")
        handle = get_problem(sess.problem_id)
        rp = handle.problem
        body = await request.json()
        y = _parse_vector(body, "y", rp.m, "y")
        if any(c < 0 for c in y):
            raise ApiError(422, "infeasible", "y must be nonnegative", "y")
        sc = rp.scenario(sess.omega)
        for i in range(rp.l):
            lhs = dot(sc.T[i], sess.x) + dot(sc.W[i], y)
            ok = (
                lhs <= sc.u[i] if sc.senses[i] == LE
                else lhs >= sc.u[i] if sc.senses[i] == GE
                else lhs == sc.u[i]
            )
            if not ok:
                raise ApiError(
                    422, "infeasible",
                    "y violates the realized second stage "
                    f"(row {i}: y exceeds what x allows)" if sc.senses[i] == LE
                    else f"y violates second-stage row {i}",
                    "y",
                )
        outcome = vadd(mat_vec(rp.C, sess.x), mat_vec(sc.Q, y))
        img = second_stage_upper_image(rp, sess.x, sess.omega)
        assert img.contains_point(outcome)
        sess.y = y
        sess.outcome = outcome
        sess.stage = DONE
        persist("sessions", sid, sess.to_json())
        doc = sess.to_json()
        doc["outcome_minimal"] = minimal_in(img, outcome)
        return doc

    frontend_dist = os.path.join(
        os.path.dirname(os.path.dirname(os.path.dirname(__file__))),
        "frontend",
        "dist",
    )
    if os.path.isdir(frontend_dist):
        app.mount(
            "/", StaticFiles(directory=frontend_dist, html=True), name="ui"
        )
    return app


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a
