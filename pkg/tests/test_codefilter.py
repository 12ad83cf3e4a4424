import random

import pytest

from promptbench.codefilter import (
    ConstructMatch,
    detect_constructs,
    extract_code,
    lex,
)
from promptbench.errors import NoCode


class TestExtractCode:
    def test_first_fenced_block_wins(self):
        raw = "Here you go:\n```python\nprint('hi')\n```\nHope that helps!"
        out = extract_code(raw)
        assert out.source == "print('hi')"
        assert out.origin == "fenced"
        assert out.fence_language_tag == "python"

    def test_unfenced_text_taken_whole(self):
        out = extract_code("print('hi')")
        assert out.source == "print('hi')"
        assert out.origin == "whole_text"
        assert out.fence_language_tag is None

    def test_empty_fenced_block_is_no_code(self):
        with pytest.raises(NoCode):
            extract_code("``````")

    def test_whole_text_trims_blank_lines_only(self):
        out = extract_code("\n  \nx = 1\n    y = 2\n\n")
        assert out.source == "x = 1\n    y = 2"

    def test_untagged_fence(self):
        out = extract_code("```\nx = 1\n```")
        assert out.source == "x = 1"
        assert out.fence_language_tag is None

    def test_second_block_ignored(self):
        raw = "```py\na = 1\n```\nor\n```py\nb = 2\n```"
        assert extract_code(raw).source == "a = 1"

    def test_unterminated_fence_runs_to_end(self):
        out = extract_code("```python\nprint('hi')")
        assert out.source == "print('hi')"
        assert out.origin == "fenced"

    def test_whitespace_only_is_no_code(self):
        with pytest.raises(NoCode):
            extract_code("   \n \n")

    def test_idempotent_on_fence_free_output(self):
        raw = "Sure!\n```\nfor i in range(3):\n    print(i)\n```"
        once = extract_code(raw)
        twice = extract_code(once.source)
        assert twice.source == once.source


class TestLex:
    def test_comment_swallows_keyword(self):
        tokens = lex("x = 1 # while")
        kinds = {t.kind for t in tokens}
        assert any(t.kind == "comment" and t.lexeme == "# while" for t in tokens)
        assert "keyword" not in kinds

    def test_string_swallows_keyword(self):
        tokens = lex("s = 'lambda'")
        assert any(t.kind == "string_literal" and t.lexeme == "'lambda'" for t in tokens)
        assert not any(t.kind == "keyword" for t in tokens)

    def test_empty_input(self):
        assert lex("") == []

    def test_triple_quoted_string(self):
        source = 'x = """one\nwhile two"""\ny'
        tokens = lex(source)
        strings = [t for t in tokens if t.kind == "string_literal"]
        assert len(strings) == 1
        assert "while" in strings[0].lexeme
        assert not any(t.kind == "keyword" for t in tokens)

    def test_prefixed_string(self):
        tokens = lex('x = f"never {1}"')
        assert any(t.kind == "string_literal" and t.lexeme.startswith('f"') for t in tokens)

    def test_unterminated_string_lexes_to_end(self):
        tokens = lex('x = "oops')
        assert tokens[-1].kind == "string_literal"
        assert tokens[-1].lexeme == '"oops'

    def test_lines_and_columns(self):
        tokens = lex("a\n  bb\n")
        a, nl1, ws, bb, nl2 = tokens
        assert (a.line, a.column) == (1, 1)
        assert (bb.line, bb.column) == (2, 3)

    def test_lossless_on_targeted_nasties(self):
        nasties = [
            "x = 'unterminated\ny = 2",
            'f"{a}" rb"\\x" # mixed',
            "'''\nabc\n",  # unterminated triple
            "\r\n\r mixed \r\n line endings",
            "0x_ff 1_000.5e-3j .5 1.",
            "émoji = '✨' # ünïcode",
            "\x00\x01\x02 garbage \xff",
            "a\\\nb",
        ]
        for source in nasties:
            assert "".join(t.lexeme for t in lex(source)) == source

    def test_lossless_on_random_strings(self):
        rng = random.Random(20240803)
        alphabet = "abXY_09 \t\n\r'\"\\#.:(){}[]=+-*/é✨\x00"
        for _ in range(500):
            source = "".join(
                rng.choice(alphabet) for _ in range(rng.randrange(0, 60))
            )
            tokens = lex(source)
            assert "".join(t.lexeme for t in tokens) == source


class TestDetectConstructs:
    def test_lambda_as_code(self):
        matches = detect_constructs("f = lambda x: x", ["lambda"])
        assert matches == [ConstructMatch(construct="lambda", line=1, column=5)]

    def test_only_string_and_comment_occurrences(self):
        assert detect_constructs("print('lambda') # lambda", ["lambda"]) == []

    def test_document_order_and_lines(self):
        matches = detect_constructs("while True:\n  while True:\n    pass", ["while"])
        assert [(m.line, m.construct) for m in matches] == [(1, "while"), (2, "while")]

    def test_identifier_constructs_match_too(self):
        matches = detect_constructs("eval('1')", ["eval"])
        assert len(matches) == 1

    def test_no_substring_matches(self):
        assert detect_constructs("lambdas = 1\nwhiler = 2", ["lambda", "while"]) == []

    def test_empty_disallowed_list(self):
        assert detect_constructs("while True: pass", []) == []

    def test_string_insertion_never_adds_matches(self):
        rng = random.Random(7)
        words = ["x", "y", "count", "lambda", "while", "print", "total"]
        pieces = [
            lambda w: f"{w} = 1\n",
            lambda w: f"# note about {w}\n",
            lambda w: f"s = '{w}'\n",
            lambda w: f"if {w}:\n    pass\n",
        ]
        for _ in range(100):
            construct = rng.choice(["lambda", "while", "eval"])
            source = "".join(
                rng.choice(pieces)(rng.choice(words)) for _ in range(rng.randrange(1, 8))
            )
            base = detect_constructs(source, [construct])
            grown = detect_constructs(source + f'\nx = "{construct}"', [construct])
            assert [(m.line, m.column) for m in grown] == [(m.line, m.column) for m in base]
