"""promptbench command line: serve the platform, validate bundles, analyze logs."""

from __future__ import annotations

import csv
import io
import json
import logging
import sys

import click

from . import analytics
from .config import load_config
from .errors import BundleError
from .problems import load_bundle
from .sessionlog import read_jsonl


@click.group()
def main():
    """Prompt-to-code exercises with sandboxed autograding."""
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s %(message)s")


@main.command()
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="Config file (TOML or JSON); defaults to $PROMPTBENCH_CONFIG.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(config_path, host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    app = create_app(load_config(config_path))
    uvicorn.run(app, host=host, port=port)


@main.command("validate-bundle")
@click.argument("path", type=click.Path(exists=True))
def validate_bundle(path):
    """Load a course bundle and report validation problems."""
    try:
        course = load_bundle(path)
    except BundleError as exc:
        click.echo(f"INVALID: {exc}", err=True)
        sys.exit(1)
    click.echo(f"OK: course {course.id!r} ({course.title})")
    for problem in course.problems:
        click.echo(
            f"  {problem.id}: {len(problem.tests)} tests, "
            f"{len(problem.visual_assets)} assets, scaffold={problem.scaffold.kind}"
        )


@main.command()
@click.option("--log", "log_path", type=click.Path(exists=True), required=True)
@click.option("--course", "course_id", required=True)
@click.option("--problem", "problem_id", default=None,
              help="Single problem id; default is every problem in the log.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
              show_default=True)
def analyze(log_path, course_id, problem_id, fmt):
    """Compute per-problem summaries and per-attempt series from a JSONL log."""
    records = [r for r in read_jsonl(log_path) if r.course_id == course_id]
    if problem_id is not None:
        if problem_id not in analytics.problems_in(records):
            click.echo(f"no submissions for problem {problem_id!r} in course {course_id!r}",
                       err=True)
            sys.exit(1)
        problem_ids = [problem_id]
    else:
        problem_ids = analytics.problems_in(records)

    results = []
    for pid in problem_ids:
        summary = analytics.summarize(records, pid)
        series = analytics.submission_series(records, pid)
        results.append((summary, series))

    if fmt == "json":
        click.echo(json.dumps(
            {
                "course_id": course_id,
                "problems": [
                    {
                        **summary.display(),
                        "avg_submissions_precise": summary.avg_submissions,
                        "avg_words_precise": summary.avg_words,
                        "series": [
                            {
                                "submission_index": p.submission_index,
                                "submitter_count": p.submitter_count,
                                "avg_words": p.avg_words,
                            }
                            for p in series
                        ],
                    }
                    for summary, series in results
                ],
            },
            indent=2,
        ))
        return

    out = io.StringIO()
    writer = csv.writer(out)
    if problem_id is None:
        writer.writerow(["problem_id", "students_attempted", "students_solved",
                         "avg_submissions", "avg_submissions_solvers", "avg_words"])
        for summary, _ in results:
            row = summary.display()
            writer.writerow([row["problem_id"], row["students_attempted"],
                             row["students_solved"], row["avg_submissions"],
                             row["avg_submissions_solvers"], row["avg_words"]])
    else:
        writer.writerow(["submission_index", "submitter_count", "avg_words"])
        for _, series in results:
            for p in series:
                writer.writerow([p.submission_index, p.submitter_count, p.avg_words])
    click.echo(out.getvalue(), nl=False)


if __name__ == "__main__":
    main()
