"""Run generated code against a problem's test suite in a remote sandbox.

Speaks the Jobe REST protocol (the same one JobeInABox exposes); a local
stub implementing the protocol lives in promptbench.sandboxstub so the
whole evaluation path can run offline.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import TYPE_CHECKING

import httpx

from .errors import DriverUnrenderable, SandboxProtocolError, SandboxUnreachable

if TYPE_CHECKING:
    from .problems import FunctionCall, PromptProblem, TestCase

logger = logging.getLogger(__name__)

OK = "ok"
COMPILE_ERROR = "compile_error"
RUNTIME_ERROR = "runtime_error"
TIME_LIMIT = "time_limit"
SANDBOX_ERROR = "sandbox_error"

# Jobe run outcomes -> outcome classes; anything else is a sandbox fault.
_JOBE_OUTCOMES = {
    15: OK,
    11: COMPILE_ERROR,
    12: RUNTIME_ERROR,
    13: TIME_LIMIT,
}

# Exercise-language identifiers -> sandbox language ids.
_SANDBOX_LANGUAGE_IDS = {"python": "python3"}

DEFAULT_CPU_TIME_LIMIT_S = 10
DEFAULT_MEMORY_LIMIT_MB = 256


@dataclass(frozen=True)
class RunSpec:
    language_id: str
    source: str
    stdin: str = ""
    cpu_time_limit_s: int = DEFAULT_CPU_TIME_LIMIT_S
    memory_limit_mb: int = DEFAULT_MEMORY_LIMIT_MB


@dataclass(frozen=True)
class RunResult:
    outcome_class: str
    stdout: str = ""
    stderr: str = ""
    exit_code: int = 0


@dataclass(frozen=True)
class TestVerdict:
    test_index: int
    passed: bool
    actual: str
    expected: str
    run: RunResult


@dataclass(frozen=True)
class EvaluationOutcome:
    verdicts: tuple[TestVerdict, ...]
    passed_all: bool
    first_failure: int | None

    @classmethod
    def from_verdicts(cls, verdicts: list[TestVerdict]) -> "EvaluationOutcome":
        failing = [v.test_index for v in verdicts if not v.passed]
        return cls(
            verdicts=tuple(verdicts),
            passed_all=not failing,
            first_failure=min(failing) if failing else None,
        )


def normalize_output(text: str) -> str:
    """Canonical form for output comparison.

    CRLF becomes LF, trailing whitespace is stripped from every line, and
    trailing blank lines are dropped.  Case and interior whitespace are
    untouched, so comparisons stay exact.
    """
    lines = [line.rstrip() for line in text.replace("\r\n", "\n").split("\n")]
    while lines and lines[-1] == "":
        lines.pop()
    return "\n".join(lines)


def render_literal(value) -> str:
    """Render a test-argument value as an exercise-language literal.

    The grammar is deliberately small: numbers, strings, booleans and
    nested lists.  Anything else raises DriverUnrenderable.
    """
    if isinstance(value, bool):
        return "True" if value else "False"
    if isinstance(value, (int, float)):
        return repr(value)
    if isinstance(value, str):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(render_literal(item) for item in value) + "]"
    raise DriverUnrenderable(f"cannot render {type(value).__name__} as a test literal")


def render_call(call: "FunctionCall") -> str:
    args = ", ".join(render_literal(a) for a in call.args)
    return f"{call.name}({args})"


def build_run(
    problem: "PromptProblem",
    test: "TestCase",
    source: str,
    *,
    cpu_time_limit_s: int = DEFAULT_CPU_TIME_LIMIT_S,
    memory_limit_mb: int = DEFAULT_MEMORY_LIMIT_MB,
) -> RunSpec:
    """Assemble the sandbox run for one test.

    stdio tests run the source as-is with the test's stdin.  Function
    tests append a driver that prints the result of the specified call.
    """
    language_id = _SANDBOX_LANGUAGE_IDS.get(problem.exercise_language, problem.exercise_language)
    if test.kind == "function_call":
        driver = f"print({render_call(test.call)})"
        return RunSpec(
            language_id=language_id,
            source=source + "\n\n" + driver,
            stdin="",
            cpu_time_limit_s=cpu_time_limit_s,
            memory_limit_mb=memory_limit_mb,
        )
    return RunSpec(
        language_id=language_id,
        source=source,
        stdin=test.stdin,
        cpu_time_limit_s=cpu_time_limit_s,
        memory_limit_mb=memory_limit_mb,
    )


class JobeClient:
    """HTTP client for a Jobe-compatible run endpoint.

    Safe to share across request handlers; each call carries the run's
    own deadline.
    """

    def __init__(self, base_url: str, *, connect_timeout_s: float = 10.0):
        self.base_url = base_url.rstrip("/")
        self._connect_timeout_s = connect_timeout_s

    def run(self, spec: RunSpec) -> RunResult:
        body = {
            "run_spec": {
                "language_id": spec.language_id,
                "sourcecode": spec.source,
                "input": spec.stdin,
                "parameters": {"cputime": spec.cpu_time_limit_s},
            }
        }
        url = f"{self.base_url}/jobe/index.php/restapi/runs"
        timeout = httpx.Timeout(spec.cpu_time_limit_s + 30.0, connect=self._connect_timeout_s)
        try:
            response = httpx.post(url, json=body, timeout=timeout)
        except httpx.HTTPError as exc:
            raise SandboxUnreachable(f"sandbox at {self.base_url}: {exc}") from exc

        if response.status_code >= 300:
            return RunResult(
                outcome_class=SANDBOX_ERROR,
                stderr=response.text,
                exit_code=1,
            )
        return parse_run_response(response)

    def execute(self, spec: RunSpec) -> RunResult:
        return self.run(spec)


def parse_run_response(response: httpx.Response) -> RunResult:
    try:
        payload = response.json()
        outcome = int(payload["outcome"])
    except (ValueError, KeyError, TypeError) as exc:
        raise SandboxProtocolError(f"malformed sandbox response: {exc}") from exc

    outcome_class = _JOBE_OUTCOMES.get(outcome, SANDBOX_ERROR)
    stdout = payload.get("stdout") or ""
    stderr = payload.get("stderr") or ""
    if outcome_class == COMPILE_ERROR and not stderr:
        stderr = payload.get("cmpinfo") or ""
    return RunResult(
        outcome_class=outcome_class,
        stdout=stdout,
        stderr=stderr,
        exit_code=0 if outcome_class == OK else 1,
    )


def execute(spec: RunSpec, sandbox) -> RunResult:
    """Run one spec through a sandbox client (anything with .run)."""
    return sandbox.run(spec)


def evaluate(
    problem: "PromptProblem",
    source: str,
    sandbox,
    *,
    cpu_time_limit_s: int = DEFAULT_CPU_TIME_LIMIT_S,
    memory_limit_mb: int = DEFAULT_MEMORY_LIMIT_MB,
    concurrency: int = 1,
) -> EvaluationOutcome:
    """Run every test in index order and collect verdicts.

    No short-circuiting: all verdicts are recorded even after a failure,
    since the full outcome feeds the log and analytics.  A protocol-level
    sandbox fault on one run becomes a sandbox_error verdict for that
    test; an unreachable sandbox propagates, since no test ran at all and
    the caller must not present that as a failing submission.
    """

    def run_one(test: "TestCase") -> TestVerdict:
        spec = build_run(
            problem,
            test,
            source,
            cpu_time_limit_s=cpu_time_limit_s,
            memory_limit_mb=memory_limit_mb,
        )
        try:
            run = sandbox.run(spec)
        except SandboxProtocolError as exc:
            run = RunResult(outcome_class=SANDBOX_ERROR, stderr=str(exc), exit_code=1)
        actual = normalize_output(run.stdout)
        passed = run.outcome_class == OK and actual == test.expected_output
        return TestVerdict(
            test_index=test.index,
            passed=passed,
            actual=actual,
            expected=test.expected_output,
            run=run,
        )

    tests = list(problem.tests)
    if concurrency > 1 and len(tests) > 1:
        with ThreadPoolExecutor(max_workers=concurrency) as pool:
            verdicts = list(pool.map(run_one, tests))
    else:
        verdicts = [run_one(t) for t in tests]

    verdicts.sort(key=lambda v: v.test_index)
    outcome = EvaluationOutcome.from_verdicts(verdicts)
    logger.info(
        "evaluated problem=%s tests=%d passed_all=%s first_failure=%s",
        problem.id,
        len(verdicts),
        outcome.passed_all,
        outcome.first_failure,
    )
    return outcome
