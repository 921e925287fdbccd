from pathlib import Path

import pytest
from hypothesis import given, settings

from tanghom import catalog
from tanghom.errors import TangleError, TooManyCrossings
from tanghom.oracle import LinkDiagram, close_word, cube_complex, cube_homology, graded_euler, parse_pd

from strategies import closed_words

DATA = Path(__file__).resolve().parent.parent / "data"

TREFOIL_Z = {(0, -3): (1, ()), (0, -1): (1, ()), (2, -5): (1, ()), (3, -9): (1, ()), (3, -7): (0, (2,))}


def test_parse_pd_trefoil():
    d = parse_pd((DATA / "trefoil.pd").read_text())
    assert d.signs == (1, 1, 1) and d.components() == 1
    assert cube_homology(d, "Z").groups == TREFOIL_Z


def test_pd_and_word_closure_agree():
    d = close_word(catalog.word("trefoil"))
    assert cube_homology(d, "Z").groups == TREFOIL_Z
    assert d.n_plus - d.n_minus == 3


def test_jones_of_trefoil():
    # unnormalized Jones polynomial q + q^3 + q^5 - q^9 in the standard grading
    d = parse_pd((DATA / "trefoil.pd").read_text())
    assert graded_euler(d) == {1: 1, 3: 1, 5: 1, 9: -1}


def test_standard_convention_negates_q():
    d = parse_pd((DATA / "trefoil.pd").read_text())
    std = cube_homology(d, "Z", convention="standard").groups
    assert std == {(j, -k): g for (j, k), g in TREFOIL_Z.items()}
    with pytest.raises(ValueError):
        cube_homology(d, convention="other")


def test_free_loops():
    d = parse_pd("loop\nloop\n")
    assert cube_homology(d, "Z").groups == {(0, -2): (1, ()), (0, 0): (2, ()), (0, 2): (1, ())}


def test_plain_number_lines_and_comments():
    text = "# trefoil\n1 5 2 4\n3, 1, 4, 6\nX[5,3,6,2]  # last\n"
    assert parse_pd(text).crossings == parse_pd((DATA / "trefoil.pd").read_text()).crossings


@pytest.mark.parametrize("text", ["X[1,2,3]", "1 2 3", "hello"])
def test_bad_pd_lines(text):
    with pytest.raises(TangleError):
        parse_pd(text)


def test_edges_must_pair_up():
    with pytest.raises(TangleError):
        LinkDiagram(((1, 2, 3, 4),), (1,))


def test_guard():
    d = close_word(catalog.word("knot_7_1"))
    with pytest.raises(TooManyCrossings):
        cube_complex(d, limit=5)


def test_close_word_needs_empty_boundary():
    from tanghom.planar import TangleWord, Cup
    with pytest.raises(TangleError):
        close_word(TangleWord.of(Cup(1, 1)))


@settings(max_examples=25)
@given(closed_words(max_m=2, max_len=4))
def test_sign_schemes_agree(w):
    d = close_word(w)
    assert cube_homology(d, "Z", scheme="before").groups == cube_homology(d, "Z", scheme="after").groups


@settings(max_examples=25)
@given(closed_words(max_m=2, max_len=4))
def test_euler_characteristic_matches_homology(w):
    d = close_word(w)
    r = cube_homology(d, "Z", convention="standard")
    assert r.euler() == graded_euler(d)
