import pytest
from hypothesis import given, strategies as st

from tanghom.errors import DifferentialNotSquareZero, NotAChainMap
from tanghom.zlinalg import (ChainComplex, ChainMap, GradedFreeModule, HomologyReport, IntMatrix,
                             coker_presentation, cone, cone_maps, homology, homology_dim, induced_rank,
                             invariant_factors, long_exact_sequence, rank, right_inverse, smith_normal_form,
                             tensor_complexes)

small = st.integers(-4, 4)


@st.composite
def int_matrices(draw, max_dim=6):
    r, c = draw(st.integers(0, max_dim)), draw(st.integers(0, max_dim))
    return IntMatrix.from_dense([[draw(small) for _ in range(c)] for _ in range(r)], c)


def one_term(n=1, j=0, k=0):
    return ChainComplex({j: [k] * n})


def arrow(M: IntMatrix, j=0, k=0):
    """``Z^cols --M--> Z^rows`` in degrees ``j, j+1``."""
    return ChainComplex({j: [k] * M.ncols, j + 1: [k] * M.nrows}, {j: M})


# -- matrices ---------------------------------------------------------------

def test_matrix_basics():
    A = IntMatrix.from_dense([[1, 2], [0, 3]])
    assert (A @ IntMatrix.identity(2)) == A
    assert (A - A).is_zero()
    assert A.transpose().to_dense() == [[1, 0], [2, 3]]
    assert A.submatrix([1], [1]).to_dense() == [[3]]
    assert A.apply({0: 1, 1: 1}) == {0: 3, 1: 3}
    assert A.mod(2).to_dense() == [[1, 0], [0, 1]]


@given(int_matrices(), int_matrices())
def test_matmul_matches_dense(A, B):
    if A.ncols != B.nrows:
        return
    want = [[sum(A.to_dense()[i][k] * B.to_dense()[k][j] for k in range(A.ncols)) for j in range(B.ncols)]
            for i in range(A.nrows)]
    assert (A @ B).to_dense() == want


# -- Smith normal form ------------------------------------------------------

@given(int_matrices())
def test_snf_factorization(A):
    U, D, V = smith_normal_form(A)
    assert U @ D @ V == A
    diag = [D[i, i] for i in range(min(D.nrows, D.ncols))]
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert invariant_factors(A) == nz


@given(int_matrices())
def test_ranks_over_rings(A):
    rz, r2, rq = rank(A, "Z"), rank(A, "Z2"), rank(A, "Q")
    assert rz == rq >= r2
    assert r2 == rq - sum(1 for d in invariant_factors(A) if d % 2 == 0)


def test_invariant_factors_examples():
    assert invariant_factors(IntMatrix.from_dense([[2, 4], [6, 8]])) == [2, 4]
    assert invariant_factors(IntMatrix.from_dense([[2]]), "Z2") == []
    with pytest.raises(ValueError):
        invariant_factors(IntMatrix.identity(1), "Z3")


def test_right_inverse():
    A = IntMatrix.from_dense([[1, 1, 0], [0, 1, 1]])
    assert A @ right_inverse(A) == IntMatrix.identity(2)
    with pytest.raises(ValueError):
        right_inverse(IntMatrix.from_dense([[2]]))


def test_coker_presentation():
    res = coker_presentation(IntMatrix.from_dense([[2], [0]]))
    assert res.free_rank == 1 and res.torsion == [2]
    assert res.projection.shape == (1, 2)


# -- complexes and homology -------------------------------------------------

def test_d_squared_checked():
    d = IntMatrix.from_dense([[1]])
    with pytest.raises(DifferentialNotSquareZero):
        ChainComplex({0: [0], 1: [0], 2: [0]}, {0: d, 1: d})
    with pytest.raises(DifferentialNotSquareZero):
        ChainComplex({0: [0], 1: [1]}, {0: d})


def test_homology_examples():
    assert homology(arrow(IntMatrix.from_dense([[1]]))).groups == {}
    r = homology(arrow(IntMatrix.from_dense([[2]])))
    assert r.groups == {(1, 0): (0, (2,))}
    assert homology(arrow(IntMatrix.from_dense([[2]])), "Z2").groups == {(0, 0): (1, ()), (1, 0): (1, ())}
    assert homology(arrow(IntMatrix.from_dense([[2]])), "Q").groups == {}


def test_cone_of_identity_is_acyclic():
    C = one_term(2)
    f = ChainMap(C, C, {0: IntMatrix.identity(2)})
    assert homology(cone(f)).groups == {}


def test_cone_of_zero_splits():
    C, D = one_term(1, k=1), one_term(2, k=1)
    f = ChainMap(C, D, {})
    assert homology(cone(f)).groups == {(-1, 1): (1, ()), (0, 1): (2, ())}


def test_cone_of_two():
    # Z --x2--> Z in degree 0 has cone Z[1] ⊕ Z with H = Z/2 in degree 0
    C = one_term()
    f = ChainMap(C, C, {0: IntMatrix.from_dense([[2]])})
    assert homology(cone(f)).groups == {(0, 0): (0, (2,))}


def test_chain_map_checks():
    C = arrow(IntMatrix.from_dense([[1]]))
    bad = ChainMap(C, C, {0: IntMatrix.identity(1)})  # misses degree 1
    with pytest.raises(NotAChainMap):
        bad.check()


def test_tensor_with_acyclic_is_acyclic():
    A = arrow(IntMatrix.from_dense([[1]]))
    B = arrow(IntMatrix.from_dense([[2], [0]]), k=3)
    assert homology(tensor_complexes(A, B)).groups == {}


@st.composite
def complexes(draw, length=3, max_dim=3):
    """Random complexes built as the cone-free sum ``d = B A`` with ``A B = 0``
    guaranteed by construction: d_j = P_{j+1} Q_j where Q_j P_j = 0."""
    dims = [draw(st.integers(0, max_dim)) for _ in range(length)]
    qdeg = {j: [0] * n for j, n in enumerate(dims)}
    d = {}
    prev = None
    for j in range(length - 1):
        M = IntMatrix.from_dense([[draw(small) for _ in range(dims[j])] for _ in range(dims[j + 1])], dims[j])
        if prev is not None and not (M @ prev).is_zero():
            M = IntMatrix.zeros(dims[j + 1], dims[j])
        d[j] = M
        prev = M
    return ChainComplex(qdeg, d)


@given(complexes(), complexes())
def test_tensor_d_squared_and_kunneth_over_q(C, D):
    T = tensor_complexes(C, D)
    T.check()
    hc, hd, ht = (homology(X, "Q").ranks() for X in (C, D, T))
    want = {}
    for (j, _), a in hc.items():
        for (l, _), b in hd.items():
            want[(j + l, 0)] = want.get((j + l, 0), 0) + a * b
    assert ht == want


@given(complexes())
def test_euler_characteristic(C):
    chi = sum((-1) ** j * C.dim(j) for j in C.qdeg)
    r = homology(C, "Q")
    assert sum((-1) ** j * n for (j, _), n in r.ranks().items()) == chi


@given(complexes())
def test_universal_coefficients_z2(C):
    # dim H(C; Z/2) = rank + 2 * (number of even torsion factors), degreewise summed
    rz, r2 = homology(C, "Z"), homology(C, "Z2")
    even = sum(1 for _, t in rz.torsion().items() for x in t if x % 2 == 0)
    assert r2.total_rank() == rz.total_rank() + 2 * even


def test_shift_and_graded_modules():
    C = arrow(IntMatrix.from_dense([[3]]), k=2)
    S = C.shifted(1, 1)
    assert S.qdeg == {-1: [3], 0: [3]} and S.diff(-1).to_dense() == [[-3]]
    M = GradedFreeModule(("a", "b"), ((0, 1), (0, 1)))
    assert M.shifted(1, 2).graded_dims() == {(-1, 3): 2}
    with pytest.raises(ValueError):
        GradedFreeModule(("a", "a"), ((0, 0), (0, 0)))


def test_report_poincare_and_equality():
    r = HomologyReport({(0, -1): (1, ()), (2, 5): (2, ()), (3, 0): (0, (2,))})
    assert r.poincare_string() == "q^(-1) + 2*t^2q^5"
    assert r.euler() == {-1: 1, 5: 2}
    assert r == HomologyReport(dict(r.groups))


# -- exact sequences --------------------------------------------------------

def test_induced_rank_and_dims():
    C = one_term(2)
    f = ChainMap(C, C, {0: IntMatrix.from_dense([[1, 0], [0, 2]])})
    assert homology_dim(C, 0, 0, "Q") == 2
    assert induced_rank(f, 0, 0, "Q") == 2
    assert induced_rank(f, 0, 0, "Z2") == 1


@pytest.mark.parametrize("fld", ["Z2", "Q"])
def test_les_of_cone(fld):
    C = arrow(IntMatrix.from_dense([[1, 1]]))
    D = arrow(IntMatrix.from_dense([[2]]))
    f = ChainMap(C, D, {0: IntMatrix.from_dense([[2, 2]]), 1: IntMatrix.from_dense([[4]])})
    f.check()
    rep = long_exact_sequence(f, fld)
    assert rep.exact and rep.nodes
    Cn, iota, pi = cone_maps(f)
    iota.check()
    pi.check()


def test_les_rejects_graded_maps():
    C = one_term()
    with pytest.raises(NotAChainMap):
        long_exact_sequence(ChainMap(C, C, {}, degree=1))


@given(st.integers(-3, 3), st.integers(-3, 3))
def test_les_scalar_maps(a, b):
    C = arrow(IntMatrix.from_dense([[a]]))
    f = ChainMap(C, C, {0: IntMatrix.from_dense([[b]]), 1: IntMatrix.from_dense([[b]])})
    for fld in ("Z2", "Q"):
        assert long_exact_sequence(f, fld).exact
