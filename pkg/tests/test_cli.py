"""Command-line front end: verdicts, JSON, DOT, trace, grep."""

import io
import json

import pytest

from drex.cli import run


def call(argv, stdin=None):
    out = io.StringIO()
    if stdin is not None:
        import sys

        old = sys.stdin
        sys.stdin = io.StringIO(stdin)
        try:
            code = run(argv, out)
        finally:
            sys.stdin = old
    else:
        code = run(argv, out)
    return code, out.getvalue()


class TestMatch:
    def test_match_exit_codes(self):
        code, out = call(["match", "ab*", "abb"])
        assert code == 0 and out.strip() == "match"
        code, out = call(["match", "ab*", "ba"])
        assert code == 1 and out.strip() == "no match"

    def test_match_dfa_engine_agrees(self):
        patterns = ["ab*", "(?:a+b)*a", "(a*)(a*)a", "~a", "[ab]&[bc]b*",
                    "^ab$", "(?:a+bb*a)*"]
        texts = ["", "a", "b", "ab", "ba", "abb", "bab", "aab"]
        for pattern in patterns:
            for text in texts:
                lazy = call(["match", pattern, text, "--engine", "lazy"])[0]
                dfa = call(["match", pattern, text, "--engine", "dfa"])[0]
                assert lazy == dfa, (pattern, text)

    def test_parse_error_exit_2(self):
        code, _ = call(["match", "(a", "x"])
        assert code == 2

    def test_state_bound_error(self):
        code, _ = call(
            ["match", "(?:a+b)*a(?:a+b)(?:a+b)", "aab", "--engine", "dfa",
             "--state-bound", "3"]
        )
        assert code == 2

    def test_stdin_input(self):
        code, _ = call(["match", "ab"], stdin="ab")
        assert code == 0


class TestSubmatch:
    def test_posix_groups_json(self):
        code, out = call(["submatch", "--policy", "posix", "(a*)(a*)a", "aa"])
        assert code == 0
        doc = json.loads(out)
        assert doc["matched"] is True
        assert doc["groups"] == [
            {"start": 0, "end": 2},
            {"start": 0, "end": 1},
            {"start": 1, "end": 1},
        ]

    def test_unmatched_group_is_null(self):
        _, out = call(["submatch", "(a)+(b)", "b"])
        doc = json.loads(out)
        assert doc["groups"][1] is None

    def test_no_match_exit_1(self):
        code, out = call(["submatch", "(a)", "b"])
        assert code == 1
        assert json.loads(out)["matched"] is False

    def test_dfa_engine_same_result(self):
        a = call(["submatch", "(a*)(b*)", "aab"])[1]
        b = call(["submatch", "(a*)(b*)", "aab", "--engine", "dfa"])[1]
        assert json.loads(a) == json.loads(b)

    def test_stream_offsets_flag(self):
        plain = json.loads(call(["submatch", "(a)", "a"])[1])
        stream = json.loads(call(["submatch", "(a)", "a", "--stream-offsets"])[1])
        assert plain["groups"][1] == {"start": 0, "end": 1}
        assert stream["groups"][1]["end"] > 1  # anchored-stream positions


class TestCompile:
    def test_dot_output(self):
        code, out = call(["compile", "ab*", "--format", "dot", "--ascii"])
        assert code == 0
        assert out.startswith("digraph")
        assert "doublecircle" in out

    def test_json_output_tagged(self):
        code, out = call(["compile", "(a*)(a*)a", "--format", "json", "--ascii"])
        assert code == 0
        doc = json.loads(out)
        assert doc["initial_ops"]
        assert doc["policy"] == "posix"


class TestTrace:
    def test_trace_chain(self):
        code, out = call(["trace", "ab*", "abb"])
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].startswith("start")
        assert lines[-1].endswith("match")
        assert any("D[b]" in l for l in lines)

    def test_trace_no_match(self):
        code, out = call(["trace", "ab*", "ba"])
        assert code == 1
        assert out.strip().endswith("no match")


class TestGrep:
    def test_filters_lines(self):
        code, out = call(["grep", "ab*c"], stdin="xabbcx\nnope\nac\n")
        assert code == 0
        assert out.splitlines() == ["xabbcx", "ac"]

    def test_no_hits(self):
        code, out = call(["grep", "zz"], stdin="a\nb\n")
        assert code == 1 and out == ""


def test_usage_error():
    code, _ = call(["bogus"])
    assert code == 2
