#!/usr/bin/env python3
"""Construct the classroom fixture log at fixtures/classroom_log.jsonl.

The original classroom data is not published, so this script builds a
synthetic log whose aggregate statistics land exactly on the reference
values the analytics must reproduce:

    problem   attempted  solved  avg subs (1dp)  avg words (0dp)
    hello        54        43        2.7             13
    ages         40        32        2.2             38
    judges       30        19        6.4             36

plus: the 54 first submissions for hello average exactly 15 words.

Every distribution below is chosen by hand and asserted before writing,
so drift in this script fails loudly rather than silently shifting the
fixture.  Run from the repo root:

    python scripts/build_fixture_log.py
"""

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from promptbench.pipeline import ModelResponse, compose_prompt  # noqa: E402
from promptbench.problems import FilterPolicy, PromptScaffold  # noqa: E402
from promptbench.sessionlog import (  # noqa: E402
    JsonlStore,
    OutcomeRecord,
    SubmissionRecord,
    VerdictEntry,
)

OUT_PATH = ROOT / "fixtures" / "classroom_log.jsonl"
COURSE_ID = "cs1-week2"
SCAFFOLD = PromptScaffold(prefix="Write a Python program that", kind="program")
START_MS = 1_689_600_000_000  # one lab session, one record per second

# per problem: {attempt count: number of sessions}, solved count,
# word-count plan, expected outputs per test, sample solution
PLANS = {
    "hello": {
        "histogram": {1: 18, 2: 13, 3: 8, 4: 6, 5: 4, 6: 2, 7: 2, 8: 1},
        "sessions": 54,
        "total_submissions": 146,
        "solved": 43,
        # first submissions average exactly 15 words; later ones bring the
        # overall mean to exactly 13
        "first_words": [14] * 18 + [15] * 18 + [16] * 18,
        "later_words": [12] * 76 + [11] * 16,
        "words_total": 1898,
        "expected": ["Enter your name: Hello Sarah", "Enter your name: Hello Riley",
                     "Enter your name: Hello Jo Anne"],
        "solution": "name = input('Enter your name: ')\nprint('Hello', name)",
    },
    "ages": {
        "histogram": {1: 12, 2: 13, 3: 10, 4: 5},
        "sessions": 40,
        "total_submissions": 88,
        "solved": 32,
        "first_words": [37] * 13 + [38] * 14 + [39] * 13,
        "later_words": [37] * 16 + [38] * 16 + [39] * 16,
        "words_total": 3344,
        "expected": ["Child", "Child", "Teenager", "Teenager", "Adult", "Adult", "Senior"],
        "solution": (
            "age = int(input())\n"
            "if age < 13:\n    print('Child')\n"
            "elif age < 20:\n    print('Teenager')\n"
            "elif age < 65:\n    print('Adult')\n"
            "else:\n    print('Senior')"
        ),
    },
    "judges": {
        "histogram": {1: 1, 2: 2, 3: 3, 4: 3, 5: 3, 6: 4, 7: 4, 8: 3,
                      9: 2, 10: 2, 11: 1, 12: 1, 14: 1},
        "sessions": 30,
        "total_submissions": 192,
        "solved": 19,
        "first_words": [35] * 10 + [36] * 10 + [37] * 10,
        "later_words": [35] * 54 + [36] * 54 + [37] * 54,
        "words_total": 6912,
        "expected": ["3.0", "8.17", "6.5"],
        "solution": (
            "nums = sorted(float(x) for x in input().split())\n"
            "print(round(sum(nums[1:4]) / 3, 2))"
        ),
    },
}

WORDBANK = (
    "reads the user input and prints a line that shows the value after it "
    "converts each number then finds the result rounded correctly before "
    "showing output exactly once for every case given by them please"
).split()


def words(n: int, salt: int) -> str:
    """A deterministic prompt continuation with exactly n words."""
    return " ".join(WORDBANK[(salt + i) % len(WORDBANK)] for i in range(n))


def attempt_counts(plan) -> list[int]:
    counts = []
    for k in sorted(plan["histogram"]):
        counts.extend([k] * plan["histogram"][k])
    assert len(counts) == plan["sessions"]
    assert sum(counts) == plan["total_submissions"]
    return sorted(counts, reverse=True)  # keen students first, for variety


def word_plan(plan, counts) -> dict[tuple[int, int], int]:
    """(session index, attempt) -> word count, honoring the exact sums."""
    firsts = list(plan["first_words"])
    laters = list(plan["later_words"])
    assert len(firsts) == plan["sessions"]
    assert sum(firsts) + sum(laters) == plan["words_total"]
    assert len(laters) == plan["total_submissions"] - plan["sessions"]
    mapping = {}
    later_at = 0
    for s, count in enumerate(counts):
        mapping[(s, 1)] = firsts[s]
        for attempt in range(2, count + 1):
            mapping[(s, attempt)] = laters[later_at]
            later_at += 1
    return mapping


def make_verdicts(plan, passed: bool) -> tuple:
    verdicts = []
    for index, expected in enumerate(plan["expected"]):
        ok = passed or index != 0
        verdicts.append(
            VerdictEntry(
                test_index=index,
                passed=ok,
                actual=expected if ok else "(wrong output)",
                expected=expected,
                outcome_class="ok",
            )
        )
    return tuple(verdicts)


def build_records():
    records = []
    created_at = START_MS
    policy = FilterPolicy()

    for problem_id, plan in PLANS.items():
        counts = attempt_counts(plan)
        plan_words = word_plan(plan, counts)
        solves = set(range(plan["solved"]))  # these sessions pass on their last attempt

        max_attempts = max(counts)
        for attempt in range(1, max_attempts + 1):
            for s, count in enumerate(counts):
                if attempt > count:
                    continue
                session_id = f"fixture-{s + 1:03d}"
                passed = s in solves and attempt == count
                text = words(plan_words[(s, attempt)], salt=s * 7 + attempt)
                prompt = compose_prompt(SCAFFOLD, text, policy)
                source = plan["solution"] if passed else "print('almost right')"
                records.append(
                    SubmissionRecord(
                        submission_id=f"fx-{problem_id}-{s + 1:03d}-{attempt:02d}",
                        session_id=session_id,
                        course_id=COURSE_ID,
                        problem_id=problem_id,
                        submission_index=attempt,
                        student_text=text,
                        rendered_prompt=prompt.rendered(),
                        responses=(
                            ModelResponse(
                                raw_text=f"```python\n{source}\n```",
                                model_id="mock-classroom",
                                latency_ms=420,
                                variant_index=0,
                            ),
                        ),
                        extracted_source=source,
                        rejected_generations=0,
                        outcome=OutcomeRecord(
                            passed_all=passed,
                            first_failure=None if passed else 0,
                            verdicts=make_verdicts(plan, passed),
                        ),
                        created_at=created_at,
                    )
                )
                created_at += 1000
    return records


def main():
    OUT_PATH.parent.mkdir(parents=True, exist_ok=True)
    if OUT_PATH.exists():
        OUT_PATH.unlink()
    store = JsonlStore(OUT_PATH)  # appending through the store checks index density
    for record in build_records():
        store.append(record)
    store.close()

    # sanity: restate the targets this fixture was built to hit
    from promptbench.analytics import submission_series, summarize
    from promptbench.sessionlog import read_jsonl

    log = list(read_jsonl(OUT_PATH))
    for problem_id, expect in {
        "hello": (54, 43, 2.7, 13),
        "ages": (40, 32, 2.2, 38),
        "judges": (30, 19, 6.4, 36),
    }.items():
        summary = summarize(log, problem_id).display()
        got = (summary["students_attempted"], summary["students_solved"],
               summary["avg_submissions"], summary["avg_words"])
        assert got == expect, f"{problem_id}: {got} != {expect}"
    first_point = submission_series(log, "hello")[0]
    assert (first_point.submitter_count, first_point.avg_words) == (54, 15.0)

    print(f"wrote {OUT_PATH.relative_to(ROOT)} ({len(log)} records)")


if __name__ == "__main__":
    main()
