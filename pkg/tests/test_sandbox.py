import random

import pytest

from promptbench.errors import DriverUnrenderable, SandboxUnreachable
from promptbench.problems import FilterPolicy, FunctionCall, PromptProblem, PromptScaffold
from promptbench.problems import TestCase as Case
from promptbench.sandbox import TestVerdict as Verdict
from promptbench.sandbox import (
    EvaluationOutcome,
    JobeClient,
    RunSpec,
    RunResult,
    build_run,
    evaluate,
    normalize_output,
    render_call,
    render_literal,
)
from promptbench.sandboxstub import SandboxStub


def make_problem(tests, pid="judges", scaffold_kind="program"):
    return PromptProblem(
        id=pid,
        title=pid.title(),
        visual_assets=(),
        scaffold=PromptScaffold(prefix="Write a Python program that", kind=scaffold_kind),
        tests=tuple(tests),
        filter_policy=FilterPolicy(),
    )


JUDGES_TESTS = [
    Case(index=0, kind="stdio", stdin="2.0 3.0 3.0 3.0 4.0\n", expected_output="3.0"),
    Case(index=1, kind="stdio", stdin="8.0 9.5 7.5 6.0 9.0\n", expected_output="8.17"),
    Case(index=2, kind="stdio", stdin="4.0 6.5 8.0 7.0 6.0\n", expected_output="6.5"),
]

MIDDLE_THREE = (
    "nums = sorted(float(x) for x in input().split())\n"
    "print(round(sum(nums[1:4]) / 3, 2))"
)
MEAN_OF_FIVE = (
    "nums = [float(x) for x in input().split()]\n"
    "print(round(sum(nums) / 5, 2))"
)


class TestNormalizeOutput:
    @pytest.mark.parametrize(
        "raw,expected",
        [
            ("Hello Sarah  \r\n\n", "Hello Sarah"),
            ("a\nb", "a\nb"),
            ("8.17\n", "8.17"),
            ("", ""),
            ("  indented kept\n", "  indented kept"),
            ("a \t \nb\t\r\n\n\n", "a\nb"),
        ],
    )
    def test_cases(self, raw, expected):
        assert normalize_output(raw) == expected

    def test_idempotent_on_random_strings(self):
        rng = random.Random(11)
        alphabet = "ab \t\r\n."
        for _ in range(300):
            s = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 40)))
            once = normalize_output(s)
            assert normalize_output(once) == once

    def test_case_sensitive_and_interior_preserved(self):
        assert normalize_output("A  b\nc") == "A  b\nc"


class TestRenderLiteral:
    def test_scalars(self):
        assert render_literal(True) == "True"
        assert render_literal(3) == "3"
        assert render_literal(8.17) == "8.17"
        assert render_literal("it's") == '"it\'s"'

    def test_nested_list(self):
        assert render_literal([0, [1, "a"], False]) == "[0, [1, 'a'], False]"

    def test_rejects_outside_grammar(self):
        with pytest.raises(DriverUnrenderable):
            render_literal({"a": 1})
        with pytest.raises(DriverUnrenderable):
            render_literal(None)


class TestBuildRun:
    def test_stdio_uses_test_stdin(self):
        problem = make_problem(JUDGES_TESTS)
        spec = build_run(problem, problem.tests[1], MIDDLE_THREE)
        assert spec.stdin == "8.0 9.5 7.5 6.0 9.0\n"
        assert spec.source == MIDDLE_THREE
        assert spec.language_id == "python3"

    def test_function_call_appends_driver(self):
        test = Case(
            index=0,
            kind="function_call",
            call=FunctionCall(name="counter", args=((0, 1, 0, 2, 0, 3),)),
            expected_output="3",
        )
        problem = make_problem([test], pid="counter", scaffold_kind="function")
        spec = build_run(problem, test, "def counter(xs):\n    return xs.count(0)")
        assert spec.source.endswith("\n\nprint(counter([0, 1, 0, 2, 0, 3]))")
        assert spec.stdin == ""

    def test_unrenderable_argument(self):
        test = Case(
            index=0,
            kind="function_call",
            call=FunctionCall(name="f", args=({"bad": 1},)),
            expected_output="x",
        )
        problem = make_problem([test])
        with pytest.raises(DriverUnrenderable):
            build_run(problem, test, "def f(x): return x")


class TestEvaluate:
    def test_correct_program_passes_all(self, local_sandbox):
        problem = make_problem(JUDGES_TESTS)
        outcome = evaluate(problem, MIDDLE_THREE, local_sandbox)
        assert outcome.passed_all
        assert outcome.first_failure is None
        assert [v.actual for v in outcome.verdicts] == ["3.0", "8.17", "6.5"]

    def test_mean_of_five_fails_on_second_test(self, local_sandbox):
        problem = make_problem(JUDGES_TESTS)
        outcome = evaluate(problem, MEAN_OF_FIVE, local_sandbox)
        assert not outcome.passed_all
        assert outcome.first_failure == 1
        verdict = outcome.verdicts[1]
        assert (verdict.expected, verdict.actual) == ("8.17", "8.0")
        # all verdicts recorded, no short-circuit
        assert len(outcome.verdicts) == 3

    def test_syntax_error_fails_every_test(self, local_sandbox):
        problem = make_problem(JUDGES_TESTS)
        outcome = evaluate(problem, "def broken(:", local_sandbox)
        assert [v.run.outcome_class for v in outcome.verdicts] == ["compile_error"] * 3
        assert outcome.first_failure == 0

    def test_runtime_error_recorded(self, local_sandbox):
        problem = make_problem([Case(index=0, kind="stdio", stdin="", expected_output="x")])
        outcome = evaluate(problem, "raise ValueError('boom')", local_sandbox)
        assert outcome.verdicts[0].run.outcome_class == "runtime_error"
        assert "boom" in outcome.verdicts[0].run.stderr

    def test_function_problem_end_to_end(self, local_sandbox):
        tests = [
            Case(index=0, kind="function_call",
                     call=FunctionCall("counter", ((0, 1, 0, 2, 0, 3),)), expected_output="3"),
            Case(index=1, kind="function_call",
                     call=FunctionCall("counter", ((1, 2, 3),)), expected_output="0"),
        ]
        problem = make_problem(tests, pid="counter")
        source = "def counter(xs):\n    return len([x for x in xs if x == 0])"
        outcome = evaluate(problem, source, local_sandbox)
        assert outcome.passed_all

    def test_concurrent_evaluation_keeps_order(self, local_sandbox):
        problem = make_problem(JUDGES_TESTS)
        outcome = evaluate(problem, MIDDLE_THREE, local_sandbox, concurrency=3)
        assert [v.test_index for v in outcome.verdicts] == [0, 1, 2]
        assert outcome.passed_all


class TestFirstFailureProperty:
    def test_first_failure_is_min_failing_index(self):
        rng = random.Random(99)
        run = RunResult(outcome_class="ok")
        for _ in range(200):
            n = rng.randrange(1, 9)
            flags = [rng.random() < 0.6 for _ in range(n)]
            verdicts = [
                Verdict(test_index=i, passed=flags[i], actual="", expected="", run=run)
                for i in range(n)
            ]
            outcome = EvaluationOutcome.from_verdicts(verdicts)
            failing = [i for i, ok in enumerate(flags) if not ok]
            assert outcome.passed_all == (not failing)
            assert outcome.first_failure == (min(failing) if failing else None)
            assert len(outcome.verdicts) == n


@pytest.fixture(scope="module")
def stub():
    with SandboxStub() as running:
        yield running


class TestJobeWireProtocol:

    def test_ok_run(self, stub):
        client = JobeClient(stub.base_url)
        result = client.run(RunSpec(language_id="python3", source="print('Hello Sarah')"))
        assert result.outcome_class == "ok"
        assert result.stdout == "Hello Sarah\n"
        assert result.exit_code == 0

    def test_stdin_round_trip(self, stub):
        client = JobeClient(stub.base_url)
        result = client.run(
            RunSpec(language_id="python3", source="print(input()[::-1])", stdin="abc\n")
        )
        assert result.stdout == "cba\n"

    def test_compile_error_maps(self, stub):
        client = JobeClient(stub.base_url)
        result = client.run(RunSpec(language_id="python3", source="def broken(:"))
        assert result.outcome_class == "compile_error"
        assert "SyntaxError" in result.stderr

    def test_time_limit(self, stub):
        client = JobeClient(stub.base_url)
        result = client.run(
            RunSpec(language_id="python3", source="while True: pass", cpu_time_limit_s=1)
        )
        assert result.outcome_class == "time_limit"

    def test_http_error_becomes_sandbox_error(self, stub):
        client = JobeClient(stub.base_url)
        # unsupported language -> stub answers 400; captured, not raised
        result = client.run(RunSpec(language_id="cobol", source="x"))
        assert result.outcome_class == "sandbox_error"
        assert result.stderr

    def test_unreachable_raises(self):
        client = JobeClient("http://127.0.0.1:9", connect_timeout_s=0.2)
        with pytest.raises(SandboxUnreachable):
            client.run(RunSpec(language_id="python3", source="print(1)"))
