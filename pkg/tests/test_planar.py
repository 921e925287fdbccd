import pytest
from hypothesis import given, strategies as st

from tanghom.errors import GeneratorRangeError, NotACrossing, OrientationConflict, PatternMismatch, StrandMismatch
from tanghom.planar import (Cap, CrossinglessMatching, Cup, Id, SigmaMinus, SigmaPlus, TangleWord, YETTER_RULES,
                            catalan, enumerate_matchings, resolve_all, resolve_flat, trace_circles, validate_word,
                            yetter_rewrite)

from strategies import matchings, words

CATALAN = [1, 1, 2, 5, 14, 42, 132, 429, 1430]


@pytest.mark.parametrize("n", range(9))
def test_catalan_counts(n):
    assert len(enumerate_matchings(n)) == catalan(n) == CATALAN[n]


def test_matchings_are_distinct_and_sorted():
    ms = enumerate_matchings(4)
    assert len(set(ms)) == len(ms)
    assert [m.pairs for m in ms] == sorted(m.pairs for m in ms)


@pytest.mark.parametrize("pairs", [((1, 3), (2, 4)), ((1, 2), (2, 3)), ((1, 4),)])
def test_bad_matchings_rejected(pairs):
    with pytest.raises(ValueError):
        CrossinglessMatching.from_pairs(pairs)


@given(matchings())
def test_cap_cup_words_close_matching(a):
    # a^t a is n circles, one per arc
    assert trace_circles(a, (), a).k == a.n
    w = a.cup_word() + a.cap_word()
    if w:
        info = validate_word(TangleWord(w))
        assert (info.m, info.n) == (0, 0)


@given(matchings(), matchings())
def test_circle_count_symmetric(a, b):
    if a.n == b.n:
        assert trace_circles(a, (), b).k == trace_circles(b, (), a).k


def test_trace_circles_small():
    a, b = enumerate_matchings(2)
    # {(1,2),(3,4)} against {(1,4),(2,3)} closes into one circle
    assert {trace_circles(a, (), b).k, trace_circles(b, (), a).k} == {1}
    assert trace_circles(a, (), a).k == 2


def test_remove_and_join_arcs():
    a = CrossinglessMatching.from_pairs([(1, 2), (3, 6), (4, 5)])
    assert a.remove_arc(1).pairs == ((1, 4), (2, 3))
    assert a.join_at(2).pairs == ((1, 4), (2, 3))
    with pytest.raises(ValueError):
        a.join_at(1)


def test_generator_boundaries():
    assert (Cup(1, 1).bottom, Cup(1, 1).top) == (0, 2)
    assert (Cap(2, 2).bottom, Cap(2, 2).top) == (4, 2)
    assert SigmaPlus(1, 2).transpose() == SigmaMinus(1, 2)


def test_strand_mismatch_position():
    with pytest.raises(StrandMismatch) as exc:
        validate_word(TangleWord.of(Cup(1, 1), Cap(1, 2)))
    assert exc.value.position == 1


def test_range_error():
    with pytest.raises(GeneratorRangeError):
        validate_word(TangleWord.of(Cup(3, 1)))


def test_orientation_conflict():
    w = TangleWord((Id(1),), ((0, "ud"), (1, "du")))
    with pytest.raises(OrientationConflict):
        validate_word(w)


def test_writhe_and_signs():
    hopf = TangleWord.of(Cup(1, 1), Cup(3, 2), SigmaPlus(2, 2), SigmaPlus(2, 2), Cap(3, 2), Cap(1, 1))
    info = validate_word(hopf)
    assert info.writhe == -2 and info.cups == 2 and (info.m, info.n) == (0, 0)
    par = TangleWord(hopf.gens, ((2, "uddu"),))
    assert validate_word(par).writhe == 2


@given(words())
def test_validate_random_words(data):
    w, m, n = data
    info = validate_word(w)
    assert (info.m, info.n) == (m, n)
    assert info.writhe == sum(info.signs)
    assert len(info.flags) == len(w.gens) + 1


@given(words())
def test_transpose_is_involution(data):
    w, m, n = data
    assert w.transpose().transpose() == w
    info = validate_word(w.transpose())
    assert (info.m, info.n) == (n, m)


def test_resolve_flat():
    w = TangleWord.of(SigmaPlus(1, 1))
    assert resolve_flat(w, 0, 0).gens == (Id(1),)
    assert resolve_flat(w, 0, 1).gens == (Cap(1, 1), Cup(1, 1))
    assert resolve_flat(TangleWord.of(SigmaMinus(1, 1)), 0, 0).gens == (Cap(1, 1), Cup(1, 1))
    with pytest.raises(NotACrossing):
        resolve_flat(TangleWord.of(Cup(1, 1)), 0, 0)
    assert resolve_all(TangleWord.of(SigmaPlus(1, 1), SigmaMinus(1, 1)), [1, 1]).gens == (
        Cap(1, 1), Cup(1, 1), Id(1))


def test_yetter_r2_and_r3():
    w = TangleWord.of(SigmaPlus(1, 2), SigmaMinus(1, 2))
    assert yetter_rewrite(w, "r2", 0).gens in ((Id(2),), ())
    w3 = TangleWord.of(SigmaPlus(1, 2), SigmaPlus(2, 2), SigmaPlus(1, 2))
    assert yetter_rewrite(w3, "r3", 0).gens == (SigmaPlus(2, 2), SigmaPlus(1, 2), SigmaPlus(2, 2))
    with pytest.raises(PatternMismatch):
        yetter_rewrite(w3, "r2", 0)
    with pytest.raises(PatternMismatch):
        yetter_rewrite(w3, "nonsense", 0)


@pytest.mark.parametrize("rule", YETTER_RULES)
def test_every_rule_has_an_instance(rule):
    from tanghom.verify import yetter_instances
    assert any(r == rule for _, r, _ in yetter_instances(2))


@given(words(max_m=2, max_len=4), st.sampled_from(YETTER_RULES), st.integers(0, 3))
def test_rewrites_preserve_boundary(data, rule, pos):
    w, m, n = data
    try:
        out = yetter_rewrite(w, rule, pos)
    except PatternMismatch:
        return
    info = validate_word(out)
    assert (info.m, info.n) == (m, n)
