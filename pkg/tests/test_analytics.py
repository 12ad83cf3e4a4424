import random

from promptbench.analytics import (
    round_half_up,
    submission_series,
    summarize,
    word_count,
)
from promptbench.pipeline import ModelResponse
from promptbench.sessionlog import OutcomeRecord, SubmissionRecord, VerdictEntry

LISTING_PROMPT = (
    "Write me a Python program that takes five decimal number separated by "
    "spaces, and outputs the average of the 3 median numbers as a decimal "
    "rounded to 2dp."
)


def make_record(session, problem, index, text, passed):
    return SubmissionRecord(
        submission_id=f"{session}-{problem}-{index}",
        session_id=session,
        course_id="c",
        problem_id=problem,
        submission_index=index,
        student_text=text,
        rendered_prompt=text,
        responses=(ModelResponse("x", "mock", 0, 0),),
        extracted_source="x",
        rejected_generations=0,
        outcome=OutcomeRecord(
            passed_all=passed,
            first_failure=None if passed else 0,
            verdicts=(VerdictEntry(0, passed, "a", "a" if passed else "b", "ok"),),
        ),
        created_at=index,
    )


def random_log(rng, problem="p1", max_sessions=50, max_subs=10):
    records = []
    for s in range(rng.randrange(0, max_sessions + 1)):
        session = f"s{s:03d}"
        n = rng.randrange(1, max_subs + 1)
        solve_at = rng.randrange(1, n + 1) if rng.random() < 0.7 else None
        for k in range(1, n + 1):
            words = " ".join("w" for _ in range(rng.randrange(0, 30)))
            records.append(
                make_record(session, problem, k, words, passed=(k == solve_at))
            )
    rng.shuffle(records)  # aggregation must not depend on record order
    return records


def naive_summary(records, problem):
    """Recount every statistic straight from the raw records."""
    mine = [r for r in records if r.problem_id == problem]
    sessions = {r.session_id for r in mine}
    solved = {r.session_id for r in mine if r.outcome.passed_all}
    counts = {s: len([r for r in mine if r.session_id == s]) for s in sessions}
    first_pass = {
        s: min(r.submission_index for r in mine if r.session_id == s and r.outcome.passed_all)
        for s in solved
    }
    words = [len(r.student_text.split()) for r in mine]
    return {
        "attempted": len(sessions),
        "solved": len(solved),
        "avg_submissions": sum(counts.values()) / len(sessions) if sessions else 0.0,
        "avg_submissions_solvers": (
            sum(first_pass.values()) / len(solved) if solved else 0.0
        ),
        "avg_words": sum(words) / len(words) if words else 0.0,
    }


def naive_series(records, problem):
    mine = [r for r in records if r.problem_id == problem]
    if not mine:
        return []
    points = []
    for k in range(1, max(r.submission_index for r in mine) + 1):
        kth = [r for r in mine if r.submission_index == k]
        words = [len(r.student_text.split()) for r in kth]
        points.append((k, len(kth), sum(words) / len(words) if words else 0.0))
    return points


class TestWordCount:
    def test_simple_sentence(self):
        assert word_count("Write me a Python program") == 5

    def test_empty(self):
        assert word_count("") == 0
        assert word_count("   \t\n ") == 0

    def test_listing_prompt_is_28_words(self):
        assert word_count(LISTING_PROMPT) == 28

    def test_punctuation_attached(self):
        assert word_count("spaces, and 2dp.") == 3


class TestSummarize:
    def test_single_solving_session(self):
        log = [make_record("s1", "p1", 1, "one two three four five", passed=True)]
        summary = summarize(log, "p1")
        assert summary.students_attempted == 1
        assert summary.students_solved == 1
        assert summary.avg_submissions == 1.0
        assert summary.avg_words == 5.0

    def test_empty_log_gives_zeros(self):
        summary = summarize([], "p1")
        assert summary.students_attempted == 0
        assert summary.students_solved == 0
        assert summary.avg_submissions == 0.0
        assert summary.avg_words == 0.0

    def test_matches_naive_recount_on_random_logs(self):
        rng = random.Random(1234)
        for _ in range(50):
            log = random_log(rng)
            expected = naive_summary(log, "p1")
            got = summarize(log, "p1")
            assert got.students_attempted == expected["attempted"]
            assert got.students_solved == expected["solved"]
            assert got.avg_submissions == expected["avg_submissions"]
            assert got.avg_submissions_solvers == expected["avg_submissions_solvers"]
            assert got.avg_words == expected["avg_words"]

    def test_display_rounding(self):
        log = [
            make_record("s1", "p1", 1, "a b", passed=False),
            make_record("s1", "p1", 2, "a b c", passed=True),
            make_record("s2", "p1", 1, "a b c d", passed=True),
        ]
        display = summarize(log, "p1").display()
        assert display["avg_submissions"] == 1.5
        assert display["avg_words"] == 3

    def test_round_half_up_not_bankers(self):
        assert round_half_up(2.25, 1) == 2.3
        assert round_half_up(2.5, 0) == 3.0
        assert round_half_up(12.5, 0) == 13.0


class TestSubmissionSeries:
    def test_every_session_once(self):
        log = [
            make_record("s1", "p1", 1, "a b c", passed=True),
            make_record("s2", "p1", 1, "a", passed=False),
        ]
        series = submission_series(log, "p1")
        assert len(series) == 1
        assert series[0].submitter_count == 2
        assert series[0].avg_words == 2.0

    def test_empty_log(self):
        assert submission_series([], "p1") == []

    def test_matches_naive_recount(self):
        rng = random.Random(99)
        for _ in range(50):
            log = random_log(rng)
            got = [
                (p.submission_index, p.submitter_count, p.avg_words)
                for p in submission_series(log, "p1")
            ]
            assert got == naive_series(log, "p1")

    def test_submitter_count_non_increasing(self):
        rng = random.Random(7)
        for _ in range(30):
            log = random_log(rng)
            counts = [p.submitter_count for p in submission_series(log, "p1")]
            assert all(a >= b for a, b in zip(counts, counts[1:]))

    def test_telescoping_sum(self):
        rng = random.Random(3)
        log = random_log(rng)
        counts = [p.submitter_count for p in submission_series(log, "p1")]
        if len(counts) >= 2:
            drops = sum(a - b for a, b in zip(counts, counts[1:]))
            assert drops == counts[0] - counts[-1]
