"""Durable, append-only record of every submission.

The log is the source of truth: session state (attempt counts, solved
flags) is maintained incrementally on append and can always be rebuilt by
replaying the records.  Two stores ship: in-memory for tests and a
single-file JSONL store with an in-memory index for deployment.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator

from .errors import IndexConflict, StoreUnavailable
from .pipeline import ModelResponse
from .sandbox import EvaluationOutcome


@dataclass(frozen=True)
class VerdictEntry:
    test_index: int
    passed: bool
    actual: str
    expected: str
    outcome_class: str


@dataclass(frozen=True)
class OutcomeRecord:
    passed_all: bool
    first_failure: int | None
    verdicts: tuple[VerdictEntry, ...]

    @classmethod
    def from_evaluation(cls, outcome: EvaluationOutcome) -> "OutcomeRecord":
        return cls(
            passed_all=outcome.passed_all,
            first_failure=outcome.first_failure,
            verdicts=tuple(
                VerdictEntry(
                    test_index=v.test_index,
                    passed=v.passed,
                    actual=v.actual,
                    expected=v.expected,
                    outcome_class=v.run.outcome_class,
                )
                for v in outcome.verdicts
            ),
        )


@dataclass(frozen=True)
class SubmissionRecord:
    submission_id: str
    session_id: str
    course_id: str
    problem_id: str
    submission_index: int  # 1-based, dense per (session, problem)
    student_text: str
    rendered_prompt: str
    responses: tuple[ModelResponse, ...]
    extracted_source: str
    rejected_generations: int
    outcome: OutcomeRecord
    created_at: int  # UTC timestamp, milliseconds

    def to_json_dict(self) -> dict:
        return {
            "submission_id": self.submission_id,
            "session_id": self.session_id,
            "course_id": self.course_id,
            "problem_id": self.problem_id,
            "submission_index": self.submission_index,
            "student_text": self.student_text,
            "rendered_prompt": self.rendered_prompt,
            "responses": [
                {
                    "raw_text": r.raw_text,
                    "model_id": r.model_id,
                    "variant_index": r.variant_index,
                    "latency_ms": r.latency_ms,
                }
                for r in self.responses
            ],
            "extracted_source": self.extracted_source,
            "rejected_generations": self.rejected_generations,
            "outcome": {
                "passed_all": self.outcome.passed_all,
                "first_failure": self.outcome.first_failure,
                "verdicts": [
                    {
                        "test_index": v.test_index,
                        "passed": v.passed,
                        "actual": v.actual,
                        "expected": v.expected,
                        "outcome_class": v.outcome_class,
                    }
                    for v in self.outcome.verdicts
                ],
            },
            "created_at": self.created_at,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "SubmissionRecord":
        outcome = data["outcome"]
        return cls(
            submission_id=data["submission_id"],
            session_id=data["session_id"],
            course_id=data["course_id"],
            problem_id=data["problem_id"],
            submission_index=data["submission_index"],
            student_text=data["student_text"],
            rendered_prompt=data["rendered_prompt"],
            responses=tuple(
                ModelResponse(
                    raw_text=r["raw_text"],
                    model_id=r["model_id"],
                    latency_ms=r["latency_ms"],
                    variant_index=r["variant_index"],
                )
                for r in data["responses"]
            ),
            extracted_source=data["extracted_source"],
            rejected_generations=data["rejected_generations"],
            outcome=OutcomeRecord(
                passed_all=outcome["passed_all"],
                first_failure=outcome["first_failure"],
                verdicts=tuple(
                    VerdictEntry(
                        test_index=v["test_index"],
                        passed=v["passed"],
                        actual=v["actual"],
                        expected=v["expected"],
                        outcome_class=v["outcome_class"],
                    )
                    for v in outcome["verdicts"]
                ),
            ),
            created_at=data["created_at"],
        )


@dataclass
class ProblemProgress:
    attempt_count: int = 0
    solved: bool = False
    solved_at: int | None = None


@dataclass
class SessionState:
    session_id: str
    problems: dict = field(default_factory=dict)  # (course_id, problem_id) -> ProblemProgress

    def progress(self, course_id: str, problem_id: str) -> ProblemProgress:
        return self.problems.get((course_id, problem_id), ProblemProgress())


class SubmissionStore:
    """Base store: atomic index assignment plus session-state upkeep.

    Appends are serialized under one lock, which both enforces the dense
    submission_index invariant per (session, course, problem) and keeps
    readers on a consistent prefix.  Subclasses persist via _persist.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._records: list[SubmissionRecord] = []
        self._counts: dict[tuple[str, str, str], int] = {}
        self._states: dict[str, SessionState] = {}

    # -- writes ------------------------------------------------------------

    def append(self, record: SubmissionRecord) -> str:
        key = (record.session_id, record.course_id, record.problem_id)
        with self._lock:
            current = self._counts.get(key, 0)
            if record.submission_index != current + 1:
                raise IndexConflict(
                    f"submission_index {record.submission_index} for {key} "
                    f"(expected {current + 1})"
                )
            self._persist(record)
            self._ingest(record)
        return record.submission_id

    def _ingest(self, record: SubmissionRecord) -> None:
        key = (record.session_id, record.course_id, record.problem_id)
        self._records.append(record)
        self._counts[key] = record.submission_index
        state = self._states.setdefault(record.session_id, SessionState(record.session_id))
        progress = state.problems.setdefault(
            (record.course_id, record.problem_id), ProblemProgress()
        )
        progress.attempt_count = record.submission_index
        if record.outcome.passed_all and not progress.solved:
            progress.solved = True
            progress.solved_at = record.created_at

    def _persist(self, record: SubmissionRecord) -> None:
        """Make the record durable; called under the append lock."""

    # -- reads -------------------------------------------------------------

    def next_index(self, session_id: str, course_id: str, problem_id: str) -> int:
        with self._lock:
            return self._counts.get((session_id, course_id, problem_id), 0) + 1

    def fetch_session(
        self,
        session_id: str,
        problem_id: str,
        course_id: str | None = None,
    ) -> list[SubmissionRecord]:
        with self._lock:
            records = [
                r
                for r in self._records
                if r.session_id == session_id
                and r.problem_id == problem_id
                and (course_id is None or r.course_id == course_id)
            ]
        return sorted(records, key=lambda r: r.submission_index)

    def session_state(self, session_id: str) -> SessionState:
        with self._lock:
            state = self._states.get(session_id)
            if state is None:
                return SessionState(session_id)
            # deep-ish copy so callers cannot mutate the live state
            return SessionState(
                session_id,
                {
                    key: ProblemProgress(p.attempt_count, p.solved, p.solved_at)
                    for key, p in state.problems.items()
                },
            )

    def session_ids(self) -> set[str]:
        with self._lock:
            return set(self._states)

    def all_records(self, course_id: str | None = None) -> list[SubmissionRecord]:
        with self._lock:
            records = [
                r for r in self._records if course_id is None or r.course_id == course_id
            ]
        # total, deterministic order: created_at first, then a key that is
        # unique per record and preserves index order within a session
        return sorted(
            records,
            key=lambda r: (r.created_at, r.session_id, r.course_id, r.problem_id, r.submission_index),
        )

    def export_log(self, course_id: str | None = None) -> Iterator[str]:
        """Stream the log as JSONL, ordered by created_at."""
        for record in self.all_records(course_id):
            yield json.dumps(record.to_json_dict(), ensure_ascii=False)


class InMemoryStore(SubmissionStore):
    """Volatile store for tests and ephemeral runs."""


class JsonlStore(SubmissionStore):
    """Append-only JSONL file with the index rebuilt in memory on open."""

    def __init__(self, path: str | Path):
        super().__init__()
        self.path = Path(path)
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            if self.path.exists():
                for record in read_jsonl(self.path):
                    self._ingest(record)
            self._file: IO[str] = open(self.path, "a", encoding="utf-8")
        except OSError as exc:
            raise StoreUnavailable(f"cannot open log at {self.path}: {exc}") from exc

    def _persist(self, record: SubmissionRecord) -> None:
        try:
            self._file.write(json.dumps(record.to_json_dict(), ensure_ascii=False) + "\n")
            self._file.flush()
            os.fsync(self._file.fileno())
        except OSError as exc:
            raise StoreUnavailable(f"cannot append to log at {self.path}: {exc}") from exc

    def close(self) -> None:
        self._file.close()


def read_jsonl(path: str | Path) -> Iterator[SubmissionRecord]:
    """Iterate records from a JSONL log file."""
    try:
        with open(path, encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if line:
                    yield SubmissionRecord.from_json_dict(json.loads(line))
    except OSError as exc:
        raise StoreUnavailable(f"cannot read log at {path}: {exc}") from exc


def import_records(store: SubmissionStore, records: Iterable[SubmissionRecord]) -> int:
    """Replay records into a store in order; returns the count appended."""
    count = 0
    for record in records:
        store.append(record)
        count += 1
    return count
