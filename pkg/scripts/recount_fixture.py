#!/usr/bin/env python3
"""Independent recount of the analytics statistics from a JSONL log.

Deliberately shares no code with the promptbench package: plain stdlib,
its own grouping and its own rounding.  Used to cross-check both the
checked-in classroom fixture and the analytics module.

    python scripts/recount_fixture.py fixtures/classroom_log.jsonl

Prints one JSON object: {problem_id: {"students_attempted", ...,
"series": [[submission_index, submitter_count, avg_words], ...]}}.
"""

import json
import sys
from collections import defaultdict
from decimal import ROUND_HALF_UP, Decimal


def recount(path):
    rows = [json.loads(line) for line in open(path, encoding="utf-8") if line.strip()]

    by_problem = defaultdict(list)
    for row in rows:
        by_problem[row["problem_id"]].append(row)

    report = {}
    for problem_id in sorted(by_problem):
        mine = by_problem[problem_id]
        sessions = defaultdict(list)
        for row in mine:
            sessions[row["session_id"]].append(row)

        attempted = len(sessions)
        solved = sum(
            1 for rows_ in sessions.values() if any(r["outcome"]["passed_all"] for r in rows_)
        )
        submission_total = sum(len(rows_) for rows_ in sessions.values())
        word_counts = [len(row["student_text"].split()) for row in mine]

        by_attempt = defaultdict(list)
        for row in mine:
            by_attempt[row["submission_index"]].append(
                len(row["student_text"].split())
            )
        series = [
            [k, len(by_attempt[k]), sum(by_attempt[k]) / len(by_attempt[k])]
            for k in sorted(by_attempt)
        ]

        report[problem_id] = {
            "students_attempted": attempted,
            "students_solved": solved,
            "avg_submissions": half_up(submission_total / attempted, "0.1"),
            "avg_words": int(half_up(sum(word_counts) / len(word_counts), "1")),
            "series": series,
        }
    return report


def half_up(value, quantum):
    return float(Decimal(str(value)).quantize(Decimal(quantum), rounding=ROUND_HALF_UP))


if __name__ == "__main__":
    print(json.dumps(recount(sys.argv[1]), indent=2))
