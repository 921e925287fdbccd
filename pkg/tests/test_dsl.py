import json

import pytest
from hypothesis import given

from tanghom import catalog
from tanghom.khov import word_homology
from tanghom.planar import Cap, Cup, SigmaPlus, TangleWord
from tanghom.tangle_dsl import (FORMAT, SourceSpan, TangleSyntaxError, ValidationError, emit_result, parse,
                                parse_movie, parse_result, parse_spanned, pretty, tokenize)

from strategies import words


def test_parse_basic():
    w = parse("cup 1 @ 1 ; s+ 1 @ 1 ; cap 1 @ 1")
    assert w.gens == (Cup(1, 1), SigmaPlus(1, 1), Cap(1, 1))


def test_newlines_and_comments_separate_items():
    text = "# trefoil\ncup 1 @ 1 ; cup 3 @ 2\ns+ 2 @ 2  # one crossing\ns+ 2 @ 2\ns+ 2 @ 2\ncap 3 @ 2 ; cap 1 @ 1\n"
    assert parse(text) == catalog.word("trefoil")


def test_trailing_semicolon():
    assert parse("cup 1 @ 1 ; cap 1 @ 1 ;") == parse("cup 1 @ 1 ; cap 1 @ 1")


def test_orient_directive_level():
    w = parse("orient ud ; id 1 ; orient ud")
    assert w.orient == ((0, "ud"), (1, "ud"))


def test_spans_cover_generators():
    text = "cup 1 @ 1 ;  cap 1 @ 1"
    pw = parse_spanned(text)
    assert [s.excerpt(text) for s in pw.spans] == ["cup 1 @ 1", "cap 1 @ 1"]


@pytest.mark.parametrize("text, line, col, fragment", [
    ("cup 1 @ 1 ; cap 1 1", 1, 19, "'@'"),
    ("cup 1 @ 1 ;\n  blah 2", 2, 3, "expected one of"),
    ("cup 1 @", 1, 8, "end of input"),
    ("cup 1 @ 1 $", 1, 11, "unexpected character"),
    ("orient uxd ; id 1", 1, 8, "u/d"),
    ("", 1, 1, "expected one of"),
])
def test_syntax_errors_carry_spans(text, line, col, fragment):
    with pytest.raises(TangleSyntaxError) as exc:
        parse(text)
    assert exc.value.span.line_col(text) == (line, col)
    assert fragment in str(exc.value)
    assert str(exc.value).startswith(f"line {line}, column {col}")


def test_validation_error_points_at_generator():
    text = "cup 1 @ 1 ; cap 1 @ 2"
    with pytest.raises(ValidationError) as exc:
        parse(text)
    assert exc.value.span.excerpt(text) == "cap 1 @ 2"


def test_span_rejects_reversed():
    with pytest.raises(ValueError):
        SourceSpan(3, 2)


def test_tokenize_kinds():
    kinds = [t.kind for t in tokenize("s- 2 @ 3 ;")]
    assert kinds == ["name", "int", "at", "int", "semi", "eof"]


@given(words())
def test_pretty_round_trip(data):
    w, _, _ = data
    assert parse(pretty(w)) == w


@pytest.mark.parametrize("name", sorted(catalog.WORDS))
def test_catalog_round_trip(name):
    w = catalog.word(name)
    assert parse(pretty(w)) == w


def test_movie_parse():
    mv = parse_movie("cup 1 @ 1\ncap 1 @ 1\nmove birth 0 1\nmove saddle 1\nmove death 0\n")
    assert mv.word == TangleWord.of(Cup(1, 1), Cap(1, 1))
    assert [(s.kind, s.site) for s in mv.steps] == [("birth", (0, 1)), ("saddle", 1), ("death", 0)]


@pytest.mark.parametrize("line", ["move", "move flip 1", "move death", "move birth 1", "move iso r2"])
def test_movie_bad_steps(line):
    with pytest.raises(TangleSyntaxError):
        parse_movie("cup 1 @ 1 ; cap 1 @ 1\n" + line)


def test_result_json_round_trip_and_determinism():
    r = word_homology(catalog.word("trefoil"), "Z")
    text = emit_result(r)
    assert text == emit_result(word_homology(catalog.word("trefoil"), "Z"))
    data = json.loads(text)
    assert data["format"] == FORMAT
    assert set(data) == {"format", "ring", "convention", "groups", "collapsed", "writhe", "cups", "poincare"}
    back = parse_result(text)
    assert back == r
    assert emit_result(back) == text


def test_result_rejects_other_format():
    with pytest.raises(ValueError):
        parse_result(json.dumps({"format": 99}))
