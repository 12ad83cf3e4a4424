#!/usr/bin/env python3
"""Regenerate configs/mock_table.json for the offline demo.

The mock completion backend is keyed by the exact rendered prompt, so the
table has to be built with the same composition code the server uses.
Each entry maps one demo prompt to a canned completion; the "*" key is
the fallback shown for any other prompt.
"""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from promptbench.pipeline import compose_prompt  # noqa: E402
from promptbench.problems import load_bundle  # noqa: E402

OUT = ROOT / "configs" / "mock_table.json"

DEMO_PROMPTS = {
    ("cs1-week2", "hello", "asks the user to enter their name and prints a greeting"):
        "```python\nname = input('Enter your name: ')\nprint('Hello', name)\n```",
    ("cs1-week2", "ages", "reads an age and prints Child, Teenager, Adult or Senior"):
        "```python\n"
        "age = int(input())\n"
        "if age < 13:\n    print('Child')\n"
        "elif age < 20:\n    print('Teenager')\n"
        "elif age < 65:\n    print('Adult')\n"
        "else:\n    print('Senior')\n"
        "```",
    ("cs1-week2", "judges",
     "takes five decimal number separated by spaces, and outputs the average "
     "of the 3 median numbers as a decimal rounded to 2dp."):
        "```python\n"
        "nums = sorted(float(x) for x in input().split())\n"
        "print(round(sum(nums[1:4]) / 3, 2))\n"
        "```",
    ("cs1-week2", "judges", "averages all five numbers rounded to 2dp"):
        "```python\n"
        "nums = [float(x) for x in input().split()]\n"
        "print(round(sum(nums) / 5, 2))\n"
        "```",
    ("functions-demo", "counter", "counter that counts how many zeros a list contains"):
        "```python\ndef counter(values):\n    return values.count(0)\n```",
}

FALLBACK = (
    "```python\n"
    "# offline demo: this prompt has no scripted completion\n"
    "print('this demo backend only knows the prompts in configs/mock_table.json')\n"
    "```"
)


def main():
    courses = {
        cid: load_bundle(ROOT / "courses" / cid)
        for cid in {c for c, _, _ in DEMO_PROMPTS}
    }
    table = {}
    for (course_id, problem_id, student_text), completion in DEMO_PROMPTS.items():
        problem = courses[course_id].get(problem_id)
        prompt = compose_prompt(
            problem.scaffold,
            student_text,
            problem.filter_policy,
            exercise_language=problem.exercise_language,
        )
        table[prompt.rendered()] = completion
    table["*"] = FALLBACK

    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(table, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    print(f"wrote {OUT.relative_to(ROOT)} ({len(table)} entries)")


if __name__ == "__main__":
    main()
