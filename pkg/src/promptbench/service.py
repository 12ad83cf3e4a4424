"""HTTP/JSON facade binding the pipeline into the submit/evaluate loop.

Code flows one way only: model to student.  No endpoint accepts source
code as input; students iterate by editing their prompt and resubmitting.
Errors come back as {"error": code, "message": text} with 4xx for caller
faults ("fix your prompt") and 5xx/502 for upstream faults ("try again
later").
"""

from __future__ import annotations

import json
import logging
import secrets
import threading
import time
import uuid
from pathlib import Path

from fastapi import FastAPI, Header, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import analytics, sandbox
from .config import AppConfig
from .errors import PromptBenchError, UnknownProblem
from .pipeline import (
    CompletionBackend,
    GenerationConfig,
    HttpChatBackend,
    MockBackend,
    compose_prompt,
    generate_checked_code,
)
from .problems import Course, PromptProblem, load_bundle
from .sessionlog import (
    InMemoryStore,
    JsonlStore,
    OutcomeRecord,
    SubmissionRecord,
    SubmissionStore,
)

logger = logging.getLogger(__name__)

# error code -> HTTP status; anything unlisted is a 500
_ERROR_STATUS = {
    "empty_prompt": 400,
    "unknown_session": 401,
    "forbidden": 403,
    "unknown_course": 404,
    "unknown_problem": 404,
    "not_found": 404,
    "submission_in_flight": 409,
    "index_conflict": 409,
    "filter_exhausted": 422,
    "backend_timeout": 502,
    "backend_rejected": 502,
    "quota_exceeded": 502,
    "no_code": 502,
    "sandbox_unreachable": 502,
    "sandbox_protocol_error": 502,
    "store_unavailable": 503,
}

_ASSET_MEDIA_TYPES = {
    ".gif": "image/gif",
    ".png": "image/png",
    ".jpg": "image/jpeg",
    ".jpeg": "image/jpeg",
    ".webp": "image/webp",
}


class ApiError(PromptBenchError):
    """Service-level error with an explicit code."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class SubmitBody(BaseModel):
    session_token: str
    student_text: str


def now_ms() -> int:
    return int(time.time() * 1000)


def build_backend(config: AppConfig) -> CompletionBackend:
    if config.llm.backend == "mock":
        table: dict = {}
        fallback = None
        if config.llm.mock_table_path:
            raw = json.loads(Path(config.llm.mock_table_path).read_text(encoding="utf-8"))
            fallback = raw.pop("*", None)
            table = raw
        return MockBackend(table, fallback=fallback)
    return HttpChatBackend(config.llm.base_url, config.llm.api_key)


def create_app(
    config: AppConfig,
    *,
    courses: list[Course] | None = None,
    backend: CompletionBackend | None = None,
    sandbox_client=None,
    store: SubmissionStore | None = None,
    clock=now_ms,
) -> FastAPI:
    """Assemble the application; test doubles can be injected directly."""
    if courses is None:
        courses = [load_bundle(path) for path in config.bundle_paths]
    course_map = {course.id: course for course in courses}
    if backend is None:
        backend = build_backend(config)
    if sandbox_client is None:
        sandbox_client = sandbox.JobeClient(config.sandbox.url)
    if store is None:
        store = JsonlStore(config.log_path) if config.log_path else InMemoryStore()

    gen_config = GenerationConfig(
        model_id=config.llm.model_id,
        temperature=config.llm.temperature,
        max_output_tokens=config.llm.max_output_tokens,
        variants_per_submission=config.llm.variants_per_submission,
        request_timeout_ms=config.llm.request_timeout_ms,
    )

    sessions: set[str] = store.session_ids()
    sessions_lock = threading.Lock()
    inflight: set[tuple[str, str, str]] = set()
    inflight_lock = threading.Lock()
    completion_slots = threading.BoundedSemaphore(config.max_inflight_completions)

    app = FastAPI(title="promptbench")

    @app.exception_handler(PromptBenchError)
    def on_domain_error(request: Request, exc: PromptBenchError):
        status = _ERROR_STATUS.get(exc.code, 500)
        if status >= 500:
            logger.error("%s: %s", exc.code, exc)
        return JSONResponse(status_code=status, content={"error": exc.code, "message": str(exc)})

    @app.exception_handler(RequestValidationError)
    def on_bad_request(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"error": "bad_request", "message": str(exc.errors()[:1])},
        )

    def require_course(course_id: str) -> Course:
        course = course_map.get(course_id)
        if course is None:
            raise ApiError("unknown_course", f"no course {course_id!r}")
        return course

    def require_session(token: str) -> str:
        with sessions_lock:
            known = token in sessions
        if not known:
            raise ApiError("unknown_session", "session token not recognized; POST /api/sessions")
        return token

    def solved_flag(session_id: str | None, course_id: str, problem_id: str) -> bool:
        if not session_id:
            return False
        return store.session_state(session_id).progress(course_id, problem_id).solved

    # -- sessions -----------------------------------------------------------

    @app.post("/api/sessions")
    def create_session():
        token = secrets.token_urlsafe(16)
        with sessions_lock:
            sessions.add(token)
        return {"session_token": token}

    # -- course & problem browsing -------------------------------------------

    @app.get("/api/courses")
    def list_courses():
        return [
            {"id": course.id, "title": course.title, "problem_ids": course.problem_ids()}
            for course in course_map.values()
        ]

    @app.get("/api/courses/{course_id}/problems")
    def list_problems(course_id: str, session: str | None = Query(default=None)):
        course = require_course(course_id)
        return {
            "course_id": course.id,
            "title": course.title,
            "problems": [
                {
                    "id": problem.id,
                    "title": problem.title,
                    "solved": solved_flag(session, course.id, problem.id),
                }
                for problem in course.problems
            ],
        }

    @app.get("/api/problems/{course_id}/{problem_id}")
    def get_problem(course_id: str, problem_id: str, session: str | None = Query(default=None)):
        course = require_course(course_id)
        problem = course.get(problem_id)
        prev_id, next_id = course.neighbors(problem_id)
        return _problem_payload(course, problem, prev_id, next_id,
                                solved_flag(session, course.id, problem.id))

    # -- the submit/evaluate loop ---------------------------------------------

    @app.post("/api/problems/{course_id}/{problem_id}/submissions")
    def submit(course_id: str, problem_id: str, body: SubmitBody):
        course = require_course(course_id)
        problem = course.get(problem_id)
        session_id = require_session(body.session_token)

        key = (session_id, course.id, problem.id)
        with inflight_lock:
            if key in inflight:
                raise ApiError(
                    "submission_in_flight",
                    "a submission for this problem is already being evaluated",
                )
            inflight.add(key)
        try:
            return _run_submission(course, problem, session_id, body.student_text)
        finally:
            with inflight_lock:
                inflight.discard(key)

    def _run_submission(course: Course, problem: PromptProblem, session_id: str, text: str):
        prompt = compose_prompt(
            problem.scaffold,
            text,
            problem.filter_policy,
            exercise_language=problem.exercise_language,
        )
        with completion_slots:
            checked = generate_checked_code(prompt, problem, gen_config, backend)
        outcome = sandbox.evaluate(
            problem,
            checked.source,
            sandbox_client,
            cpu_time_limit_s=config.sandbox.cpu_time_limit_s,
            memory_limit_mb=config.sandbox.memory_limit_mb,
            concurrency=config.sandbox.test_concurrency,
        )

        record = SubmissionRecord(
            submission_id=uuid.uuid4().hex,
            session_id=session_id,
            course_id=course.id,
            problem_id=problem.id,
            submission_index=store.next_index(session_id, course.id, problem.id),
            student_text=prompt.student_text,
            rendered_prompt=prompt.rendered(),
            responses=checked.responses,
            extracted_source=checked.source,
            rejected_generations=checked.rejected_generations,
            outcome=OutcomeRecord.from_evaluation(outcome),
            created_at=clock(),
        )
        store.append(record)

        response = {
            "submission_id": record.submission_id,
            "submission_index": record.submission_index,
            "generated_code": checked.source,
            "passed_all": outcome.passed_all,
            "first_failure": None,
            "next_problem_id": None,
        }
        if outcome.passed_all:
            response["next_problem_id"] = course.neighbors(problem.id)[1]
        else:
            index = outcome.first_failure
            verdict = outcome.verdicts[index]
            test = problem.tests[index]
            response["first_failure"] = {
                "test_index": index,
                "stdin_or_call": (
                    test.stdin if test.kind == "stdio" else sandbox.render_call(test.call)
                ),
                "expected": verdict.expected,
                "actual": verdict.actual,
            }
        return response

    @app.get("/api/problems/{course_id}/{problem_id}/submissions")
    def submission_history(course_id: str, problem_id: str, session: str = Query(...)):
        course = require_course(course_id)
        course.get(problem_id)  # 404 for unknown ids
        records = store.fetch_session(session, problem_id, course.id)
        return [record.to_json_dict() for record in records]

    # -- instructor analytics ---------------------------------------------------

    @app.get("/api/analytics/{course_id}/{problem_id}")
    def problem_analytics(
        course_id: str,
        problem_id: str,
        authorization: str | None = Header(default=None),
    ):
        if config.analytics_token:
            if authorization != f"Bearer {config.analytics_token}":
                raise ApiError("forbidden", "analytics requires the configured bearer token")
        course = require_course(course_id)
        course.get(problem_id)
        records = store.all_records(course.id)
        summary = analytics.summarize(records, problem_id)
        series = analytics.submission_series(records, problem_id)
        return {
            "summary": {
                "problem_id": summary.problem_id,
                "students_attempted": summary.students_attempted,
                "students_solved": summary.students_solved,
                "avg_submissions": summary.avg_submissions,
                "avg_submissions_solvers": summary.avg_submissions_solvers,
                "avg_words": summary.avg_words,
                "display": summary.display(),
            },
            "series": [
                {
                    "submission_index": point.submission_index,
                    "submitter_count": point.submitter_count,
                    "avg_words": point.avg_words,
                }
                for point in series
            ],
        }

    # -- static assets ------------------------------------------------------------

    @app.get("/assets/{course_id}/{problem_id}/{asset_name}")
    def problem_asset(course_id: str, problem_id: str, asset_name: str):
        course = require_course(course_id)
        problem = course.get(problem_id)
        for path in problem.visual_assets:
            if path.name == asset_name:
                media_type = _ASSET_MEDIA_TYPES.get(path.suffix.lower())
                return FileResponse(path, media_type=media_type)
        raise ApiError("not_found", f"no asset {asset_name!r} for problem {problem_id!r}")

    if config.ui_dir and Path(config.ui_dir).is_dir():
        app.mount("/app", StaticFiles(directory=config.ui_dir, html=True), name="app")

    return app


def _problem_payload(
    course: Course,
    problem: PromptProblem,
    prev_id: str | None,
    next_id: str | None,
    solved: bool,
) -> dict:
    return {
        "id": problem.id,
        "course_id": course.id,
        "title": problem.title,
        "scaffold": {"kind": problem.scaffold.kind, "prefix": problem.scaffold.prefix},
        "exercise_language": problem.exercise_language,
        "assets": [
            f"/assets/{course.id}/{problem.id}/{name}" for name in problem.asset_names()
        ],
        "prev_problem_id": prev_id,
        "next_problem_id": next_id,
        "solved": solved,
    }
