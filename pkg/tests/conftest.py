import json
from pathlib import Path

import pytest

from promptbench import sandbox
from promptbench.sandboxstub import run_python_job

REPO_ROOT = Path(__file__).resolve().parent.parent
COURSES_DIR = REPO_ROOT / "courses"
FIXTURES_DIR = REPO_ROOT / "fixtures"

# 1x1 transparent GIF; bundles need at least one visual asset
TINY_GIF = bytes.fromhex(
    "47494638396101000100800000000000ffffff21f90401000000002c00000000"
    "010001000002024401003b"
)


def pytest_runtest_logreport(report):
    """One visible pass/fail line per acceptance criterion."""
    if report.when == "call" and "test_acceptance" in report.nodeid:
        verdict = "PASS" if report.passed else "FAIL"
        print(f"\n[{verdict}] {report.nodeid.split('::', 1)[1]}")


class LocalSandboxClient:
    """In-process stand-in for a Jobe client: same jobs, no HTTP."""

    def run(self, spec: sandbox.RunSpec) -> sandbox.RunResult:
        payload = run_python_job(spec.source, spec.stdin, spec.cpu_time_limit_s)
        outcome_class = sandbox._JOBE_OUTCOMES.get(payload["outcome"], sandbox.SANDBOX_ERROR)
        stderr = payload["stderr"] or payload["cmpinfo"]
        return sandbox.RunResult(
            outcome_class=outcome_class,
            stdout=payload["stdout"],
            stderr=stderr,
            exit_code=0 if outcome_class == sandbox.OK else 1,
        )


@pytest.fixture
def local_sandbox():
    return LocalSandboxClient()


def write_bundle(root: Path, course_id="demo", problems=None):
    """Write a minimal valid bundle; problems maps id -> overrides."""
    if problems is None:
        problems = {"one": {}}
    (root / "course.json").parent.mkdir(parents=True, exist_ok=True)
    (root / "course.json").write_text(
        json.dumps({"id": course_id, "title": "Demo", "problems": list(problems)})
    )
    for pid, overrides in problems.items():
        pdir = root / pid
        (pdir / "assets").mkdir(parents=True, exist_ok=True)
        meta = {
            "title": pid.title(),
            "scaffold": {"kind": "program", "prefix": "Write a Python program that"},
            "assets": ["demo.gif"],
            "filter": {"disallowed": [], "allowed_hint": [], "max_regenerations": 2},
        }
        meta.update(overrides.get("meta", {}))
        tests = overrides.get(
            "tests",
            [{"kind": "stdio", "stdin": "", "expected": "hi"}],
        )
        (pdir / "problem.json").write_text(json.dumps(meta))
        if tests is not None:
            (pdir / "tests.json").write_text(json.dumps(tests))
        for asset in meta["assets"]:
            (pdir / "assets" / asset).write_bytes(TINY_GIF)
    return root
