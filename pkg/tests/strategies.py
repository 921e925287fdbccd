"""Hypothesis strategies for words and complexes."""
from hypothesis import strategies as st

from tanghom.planar import CAP, CUP, SMINUS, SPLUS, ElementaryGenerator, TangleWord, enumerate_matchings


@st.composite
def words(draw, bottom=None, max_m=3, max_len=6, crossings=True):
    """Valid words with every level holding at most ``2 * max_m`` points."""
    p = draw(st.integers(0, max_m)) if bottom is None else bottom
    start = p
    gens = []
    for _ in range(draw(st.integers(1, max_len))):
        opts = []
        if p + 1 <= max_m:
            opts += [ElementaryGenerator(CUP, i, p + 1) for i in range(1, 2 * p + 2)]
        if p >= 1:
            opts += [ElementaryGenerator(CAP, i, p) for i in range(1, 2 * p)]
            if crossings:
                opts += [ElementaryGenerator(k, i, p) for k in (SPLUS, SMINUS) for i in range(1, 2 * p)]
        g = draw(st.sampled_from(opts))
        gens.append(g)
        p = g.top // 2
    return TangleWord(tuple(gens)), start, p


@st.composite
def closed_words(draw, max_m=2, max_len=5):
    """Words with empty boundary: a cup word, a middle and a cap word."""
    m = draw(st.integers(1, max_m))
    a = draw(st.sampled_from(enumerate_matchings(m)))
    b = draw(st.sampled_from(enumerate_matchings(m)))
    mid = []
    for _ in range(draw(st.integers(0, max_len))):
        kind = draw(st.sampled_from((SPLUS, SMINUS)))
        mid.append(ElementaryGenerator(kind, draw(st.integers(1, 2 * m - 1)), m))
    return TangleWord(a.cup_word() + tuple(mid) + b.cap_word())


def matchings(max_n=4):
    return st.integers(0, max_n).flatmap(lambda n: st.sampled_from(enumerate_matchings(n)))
