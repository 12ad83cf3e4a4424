"""Usage metrics over the submission log.

Per-problem summaries (how many students attempted and solved, average
submissions, average prompt length) plus per-attempt-number series (how
many students reached attempt k and how long their prompts were).

A "word" is a maximal whitespace-delimited run, punctuation attached;
instructors comparing cohorts should count the same way.  Averages keep
full precision internally; display() rounds half-up to the conventional
places (submissions to 1 dp, words to whole numbers).
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Sequence

from .sessionlog import SubmissionRecord


def word_count(student_text: str) -> int:
    """Number of maximal non-whitespace runs."""
    return len(student_text.split())


@dataclass(frozen=True)
class ProblemSummary:
    problem_id: str
    students_attempted: int
    students_solved: int
    avg_submissions: float          # mean over all attempting sessions
    avg_submissions_solvers: float  # mean over sessions that solved
    avg_words: float                # mean over every submission's prompt

    def display(self) -> dict:
        return {
            "problem_id": self.problem_id,
            "students_attempted": self.students_attempted,
            "students_solved": self.students_solved,
            "avg_submissions": round_half_up(self.avg_submissions, 1),
            "avg_submissions_solvers": round_half_up(self.avg_submissions_solvers, 1),
            "avg_words": int(round_half_up(self.avg_words, 0)),
        }


@dataclass(frozen=True)
class SubmissionSeriesPoint:
    submission_index: int  # 1-based attempt number
    submitter_count: int
    avg_words: float


def round_half_up(value: float, places: int) -> float:
    quantum = Decimal(1).scaleb(-places)
    return float(Decimal(str(value)).quantize(quantum, rounding=ROUND_HALF_UP))


def summarize(log: Iterable[SubmissionRecord], problem_id: str) -> ProblemSummary:
    """Aggregate one problem's records into its summary row.

    A session counts as attempted with >= 1 submission and as solved with
    >= 1 passing submission.  An empty log yields a zero summary.
    """
    per_session: dict[str, int] = {}
    first_pass: dict[str, int] = {}  # session -> index of earliest passing submission
    words_total = 0
    submissions_total = 0

    for record in log:
        if record.problem_id != problem_id:
            continue
        per_session[record.session_id] = per_session.get(record.session_id, 0) + 1
        words_total += word_count(record.student_text)
        submissions_total += 1
        if record.outcome.passed_all:
            seen = first_pass.get(record.session_id)
            if seen is None or record.submission_index < seen:
                first_pass[record.session_id] = record.submission_index

    attempted = len(per_session)
    solved = len(first_pass)
    return ProblemSummary(
        problem_id=problem_id,
        students_attempted=attempted,
        students_solved=solved,
        avg_submissions=(
            sum(per_session.values()) / attempted if attempted else 0.0
        ),
        avg_submissions_solvers=(
            sum(first_pass.values()) / solved if solved else 0.0
        ),
        avg_words=words_total / submissions_total if submissions_total else 0.0,
    )


def submission_series(
    log: Iterable[SubmissionRecord], problem_id: str
) -> list[SubmissionSeriesPoint]:
    """Per-attempt-number aggregates for one problem.

    Point k covers exactly the k-th submission of every session that got
    that far, so submitter counts are non-increasing in k.
    """
    by_index: dict[int, list[int]] = {}
    for record in log:
        if record.problem_id != problem_id:
            continue
        by_index.setdefault(record.submission_index, []).append(
            word_count(record.student_text)
        )

    if not by_index:
        return []
    return [
        SubmissionSeriesPoint(
            submission_index=k,
            submitter_count=len(by_index.get(k, [])),
            avg_words=(
                sum(by_index[k]) / len(by_index[k]) if by_index.get(k) else 0.0
            ),
        )
        for k in range(1, max(by_index) + 1)
    ]


def problems_in(log: Sequence[SubmissionRecord]) -> list[str]:
    """Problem ids present in the log, in first-seen order."""
    seen: list[str] = []
    for record in log:
        if record.problem_id not in seen:
            seen.append(record.problem_id)
    return seen
