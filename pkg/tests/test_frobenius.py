import pytest
from hypothesis import given, strategies as st

from tanghom.frobenius import (ONE, X, LabeledTensor, comult, comult_lin, counit, counit_lin, degree, label_degree,
                               mult, mult_lin, unit, verify_axioms)


def test_axioms_all_hold():
    res = verify_axioms()
    assert res and all(res.values()), res


def test_structure_maps():
    assert mult(ONE, X) == {X: 1} and mult(X, X) == {}
    assert comult(ONE) == {(ONE, X): 1, (X, ONE): 1}
    assert comult(X) == {(X, X): 1}
    assert (counit(ONE), counit(X)) == (0, 1) and unit() == ONE


def test_degrees():
    assert (degree(ONE), degree(X)) == (-1, 1)
    assert label_degree(0b101, 3) == 1


@pytest.mark.parametrize("x", [ONE, X])
@pytest.mark.parametrize("y", [ONE, X])
def test_maps_shift_degree(x, y):
    # m and Delta both raise degree by one (1 sits in degree -1)
    for z in mult(x, y):
        assert degree(z) == degree(x) + degree(y) + 1
    for (a, b) in comult(x):
        assert degree(a) + degree(b) == degree(x) + 1


vectors = st.dictionaries(st.sampled_from([ONE, X]), st.integers(-5, 5))


@given(vectors, vectors)
def test_mult_bilinear_commutative(u, v):
    assert mult_lin(u, v) == mult_lin(v, u)


@given(vectors)
def test_counit_of_comult(u):
    # (eps ⊗ id) Delta = id
    out = {}
    for (a, b), c in comult_lin(u).items():
        out[b] = out.get(b, 0) + counit(a) * c
    assert {k: v for k, v in out.items() if v} == {k: v for k, v in u.items() if v}


@given(vectors)
def test_z2_reduction(u):
    assert counit_lin(u, "Z2") == counit_lin(u) % 2


def test_labeled_tensor():
    t = LabeledTensor.basis(("a", "b"), 0b10)
    assert t.degrees() == {0} and t.is_homogeneous()
    s = t + LabeledTensor.basis(("a", "b"), 0b01)
    assert s.is_homogeneous() and str(s).count("⊗") == 2
    assert str(t + LabeledTensor.build({k: -c for k, c in t.terms})) == "0"
