"""Load and serve course bundles of prompt problems.

A bundle is a plain directory tree: course.json names the problems in
order, and each problem directory carries problem.json, tests.json and
an assets/ directory of images or animations.  Bundles are parsed once
into immutable snapshots; request handlers only ever read them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (
    AssetNotFound,
    DuplicateProblemId,
    MalformedManifest,
    MalformedTest,
    MissingManifest,
    MissingTests,
    UnknownProblem,
)
from .sandbox import normalize_output

SCAFFOLD_KINDS = ("program", "function")
TEST_KINDS = ("stdio", "function_call")

# Visual assets must be image/animation files; anything carrying
# machine-readable text (txt, svg, html...) is rejected at load time.
ASSET_EXTENSIONS = (".gif", ".png", ".jpg", ".jpeg", ".webp")


@dataclass(frozen=True)
class PromptScaffold:
    prefix: str
    kind: str  # "program" | "function"


@dataclass(frozen=True)
class FunctionCall:
    name: str
    args: tuple


@dataclass(frozen=True)
class TestCase:
    index: int
    kind: str  # "stdio" | "function_call"
    expected_output: str  # already normalized
    stdin: str = ""
    call: FunctionCall | None = None
    visibility: str = "hidden_until_failed"


@dataclass(frozen=True)
class FilterPolicy:
    disallowed_constructs: tuple[str, ...] = ()
    allowed_constructs_hint: tuple[str, ...] = ()
    max_regenerations: int = 2


@dataclass(frozen=True)
class PromptProblem:
    id: str
    title: str
    visual_assets: tuple[Path, ...]
    scaffold: PromptScaffold
    tests: tuple[TestCase, ...]
    filter_policy: FilterPolicy = field(default_factory=FilterPolicy)
    exercise_language: str = "python"

    def asset_names(self) -> list[str]:
        return [p.name for p in self.visual_assets]


@dataclass(frozen=True)
class Course:
    id: str
    title: str
    problems: tuple[PromptProblem, ...]

    def problem_ids(self) -> list[str]:
        return [p.id for p in self.problems]

    def get(self, problem_id: str) -> PromptProblem:
        for problem in self.problems:
            if problem.id == problem_id:
                return problem
        raise UnknownProblem(f"no problem {problem_id!r} in course {self.id!r}")

    def neighbors(self, problem_id: str) -> tuple[str | None, str | None]:
        """(previous id, next id) in manifest order; None at the edges."""
        ids = self.problem_ids()
        try:
            pos = ids.index(problem_id)
        except ValueError:
            raise UnknownProblem(f"no problem {problem_id!r} in course {self.id!r}") from None
        prev_id = ids[pos - 1] if pos > 0 else None
        next_id = ids[pos + 1] if pos + 1 < len(ids) else None
        return prev_id, next_id


def get_problem(course: Course, problem_id: str) -> PromptProblem:
    return course.get(problem_id)


def load_bundle(root_path: str | Path) -> Course:
    """Parse and validate a course bundle directory into a Course."""
    root = Path(root_path)
    manifest_path = root / "course.json"
    if not manifest_path.is_file():
        raise MissingManifest(f"no course.json under {root}")
    manifest = _read_json(manifest_path)

    course_id = _require_str(manifest, "id", manifest_path)
    title = _require_str(manifest, "title", manifest_path)
    problem_ids = manifest.get("problems")
    if not isinstance(problem_ids, list) or not all(isinstance(p, str) for p in problem_ids):
        raise MalformedManifest(f"{manifest_path}: 'problems' must be a list of ids")

    seen = set()
    for pid in problem_ids:
        if pid in seen:
            raise DuplicateProblemId(f"problem id {pid!r} listed twice in {manifest_path}")
        seen.add(pid)

    problems = tuple(_load_problem(root / pid, pid) for pid in problem_ids)
    return Course(id=course_id, title=title, problems=problems)


def _load_problem(problem_dir: Path, problem_id: str) -> PromptProblem:
    meta_path = problem_dir / "problem.json"
    if not meta_path.is_file():
        raise MissingManifest(f"no problem.json under {problem_dir}")
    meta = _read_json(meta_path)

    title = _require_str(meta, "title", meta_path)
    scaffold = _parse_scaffold(meta.get("scaffold"), meta_path)
    policy = _parse_filter(meta.get("filter", {}), meta_path)
    language = meta.get("language", "python")
    if not isinstance(language, str) or not language:
        raise MalformedManifest(f"{meta_path}: 'language' must be a non-empty string")

    assets = _resolve_assets(problem_dir, meta.get("assets"), meta_path)
    tests = _load_tests(problem_dir / "tests.json", problem_id)

    return PromptProblem(
        id=problem_id,
        title=title,
        visual_assets=assets,
        scaffold=scaffold,
        tests=tests,
        filter_policy=policy,
        exercise_language=language,
    )


def _parse_scaffold(raw, meta_path: Path) -> PromptScaffold:
    if not isinstance(raw, dict):
        raise MalformedManifest(f"{meta_path}: missing 'scaffold' object")
    kind = raw.get("kind")
    prefix = raw.get("prefix")
    if kind not in SCAFFOLD_KINDS:
        raise MalformedManifest(f"{meta_path}: scaffold kind must be one of {SCAFFOLD_KINDS}")
    if not isinstance(prefix, str) or not prefix.strip():
        raise MalformedManifest(f"{meta_path}: scaffold prefix must be a non-empty string")
    return PromptScaffold(prefix=prefix, kind=kind)


def _parse_filter(raw, meta_path: Path) -> FilterPolicy:
    if not isinstance(raw, dict):
        raise MalformedManifest(f"{meta_path}: 'filter' must be an object")
    disallowed = _str_list(raw.get("disallowed", []), "filter.disallowed", meta_path)
    allowed = _str_list(raw.get("allowed_hint", []), "filter.allowed_hint", meta_path)
    overlap = set(disallowed) & set(allowed)
    if overlap:
        raise MalformedManifest(
            f"{meta_path}: constructs {sorted(overlap)} are both disallowed and allowed"
        )
    max_regen = raw.get("max_regenerations", 2)
    if not isinstance(max_regen, int) or isinstance(max_regen, bool) or max_regen < 0:
        raise MalformedManifest(f"{meta_path}: filter.max_regenerations must be an integer >= 0")
    return FilterPolicy(
        disallowed_constructs=tuple(disallowed),
        allowed_constructs_hint=tuple(allowed),
        max_regenerations=max_regen,
    )


def _resolve_assets(problem_dir: Path, names, meta_path: Path) -> tuple[Path, ...]:
    if not isinstance(names, list) or not names:
        raise MalformedManifest(f"{meta_path}: 'assets' must list at least one visual asset")
    resolved = []
    for name in names:
        if not isinstance(name, str):
            raise MalformedManifest(f"{meta_path}: asset names must be strings")
        if not name.lower().endswith(ASSET_EXTENSIONS):
            raise MalformedManifest(
                f"{meta_path}: asset {name!r} is not an image/animation "
                f"(allowed: {', '.join(ASSET_EXTENSIONS)})"
            )
        path = problem_dir / "assets" / name
        if not path.is_file():
            raise AssetNotFound(f"{meta_path}: asset file {name!r} not found under assets/")
        resolved.append(path)
    return tuple(resolved)


def _load_tests(tests_path: Path, problem_id: str) -> tuple[TestCase, ...]:
    if not tests_path.is_file():
        raise MissingTests(f"problem {problem_id!r} has no tests.json")
    raw = _read_json(tests_path)
    if not isinstance(raw, list) or not raw:
        raise MissingTests(f"{tests_path}: needs at least one test case")

    tests = []
    for index, entry in enumerate(raw):
        if not isinstance(entry, dict):
            raise MalformedTest(f"{tests_path}[{index}]: test must be an object")
        kind = entry.get("kind")
        if kind not in TEST_KINDS:
            raise MalformedTest(f"{tests_path}[{index}]: kind must be one of {TEST_KINDS}")
        expected = entry.get("expected")
        if not isinstance(expected, str):
            raise MalformedTest(f"{tests_path}[{index}]: 'expected' must be a string")

        if kind == "stdio":
            stdin = entry.get("stdin", "")
            if not isinstance(stdin, str):
                raise MalformedTest(f"{tests_path}[{index}]: 'stdin' must be a string")
            tests.append(
                TestCase(
                    index=index,
                    kind=kind,
                    stdin=stdin,
                    expected_output=normalize_output(expected),
                )
            )
        else:
            call = entry.get("call")
            if not isinstance(call, dict):
                raise MalformedTest(f"{tests_path}[{index}]: function_call needs a 'call' object")
            name = call.get("name")
            if not isinstance(name, str) or not name.isidentifier():
                raise MalformedTest(f"{tests_path}[{index}]: call.name must be an identifier")
            args = call.get("args", [])
            if not isinstance(args, list):
                raise MalformedTest(f"{tests_path}[{index}]: call.args must be a list")
            for arg in args:
                _check_literal(arg, tests_path, index)
            tests.append(
                TestCase(
                    index=index,
                    kind=kind,
                    call=FunctionCall(name=name, args=_freeze(args)),
                    expected_output=normalize_output(expected),
                )
            )
    return tuple(tests)


def _check_literal(value, tests_path: Path, index: int) -> None:
    """Enforce the restricted literal grammar: numbers, strings, booleans, lists."""
    if isinstance(value, bool) or isinstance(value, (int, float, str)):
        return
    if isinstance(value, list):
        for item in value:
            _check_literal(item, tests_path, index)
        return
    raise MalformedTest(
        f"{tests_path}[{index}]: argument {value!r} is outside the literal grammar "
        "(numbers, strings, booleans, nested lists)"
    )


def _freeze(value):
    if isinstance(value, list):
        return tuple(_freeze(v) for v in value)
    return value


def _read_json(path: Path):
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise MalformedManifest(f"{path}: {exc}") from exc


def _require_str(obj: dict, key: str, path: Path) -> str:
    value = obj.get(key)
    if not isinstance(value, str) or not value.strip():
        raise MalformedManifest(f"{path}: {key!r} must be a non-empty string")
    return value


def _str_list(raw, label: str, path: Path) -> list[str]:
    if not isinstance(raw, list) or not all(isinstance(s, str) for s in raw):
        raise MalformedManifest(f"{path}: {label} must be a list of strings")
    return raw
