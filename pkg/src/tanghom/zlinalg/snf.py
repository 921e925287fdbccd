"""Smith normal form, invariant factors and ranks over Z, Z/2 and Q."""
from __future__ import annotations

import heapq
from collections import defaultdict

from . import _backend
from .matrix import IntMatrix

RINGS = ("Z", "Z2", "Q")


# -- full Smith normal form with transforms ----------------------------------

def _smith_full(a: list[list[int]], ncols: int | None = None):
    """Return ``(U, Uinv, D, V, Vinv)`` as dense lists with ``A = U D V``.

    Pivots are chosen by minimal absolute value; the diagonal is made
    divisibility ordered at the end.
    """
    nr = len(a)
    nc = len(a[0]) if nr else (ncols or 0)
    s = [list(r) for r in a]
    U = [[int(i == j) for j in range(nr)] for i in range(nr)]
    Ui = [[int(i == j) for j in range(nr)] for i in range(nr)]
    V = [[int(i == j) for j in range(nc)] for i in range(nc)]
    Vi = [[int(i == j) for j in range(nc)] for i in range(nc)]

    # every operation keeps A = U S V and Ui = U^-1, Vi = V^-1
    def row_add(i, j, c):          # row_i(S) += c row_j(S)
        if not c:
            return
        si, sj = s[i], s[j]
        for k in range(nc):
            if sj[k]:
                si[k] += c * sj[k]
        for r in U:                # col_j(U) -= c col_i(U)
            r[j] -= c * r[i]
        ri, rj = Ui[i], Ui[j]      # row_i(Ui) += c row_j(Ui)
        for k in range(nr):
            if rj[k]:
                ri[k] += c * rj[k]

    def row_swap(i, j):
        s[i], s[j] = s[j], s[i]
        for r in U:
            r[i], r[j] = r[j], r[i]
        Ui[i], Ui[j] = Ui[j], Ui[i]

    def row_neg(i):
        s[i] = [-x for x in s[i]]
        for r in U:
            r[i] = -r[i]
        Ui[i] = [-x for x in Ui[i]]

    def col_add(i, j, c):          # col_i(S) += c col_j(S)
        if not c:
            return
        for r in s:
            if r[j]:
                r[i] += c * r[j]
        vi, vj = V[i], V[j]        # row_j(V) -= c row_i(V)
        for k in range(nc):
            if vi[k]:
                vj[k] -= c * vi[k]
        for r in Vi:               # col_i(Vi) += c col_j(Vi)
            r[i] += c * r[j]

    def col_swap(i, j):
        for r in s:
            r[i], r[j] = r[j], r[i]
        V[i], V[j] = V[j], V[i]
        for r in Vi:
            r[i], r[j] = r[j], r[i]

    t = 0
    while t < min(nr, nc):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                v = s[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i, j = best
        row_swap(t, i)
        col_swap(t, j)
        while True:
            p = s[t][t]
            dirty = False
            for i in range(t + 1, nr):
                if s[i][t]:
                    row_add(i, t, -(s[i][t] // p))
                    dirty |= bool(s[i][t])
            for j in range(t + 1, nc):
                if s[t][j]:
                    col_add(j, t, -(s[t][j] // p))
                    dirty |= bool(s[t][j])
            if not dirty:
                # divisibility of the remaining block
                bad = None
                for i in range(t + 1, nr):
                    for j in range(t + 1, nc):
                        if s[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                row_add(t, bad, 1)
                continue
            best = None
            for i in range(t, nr):
                if s[i][t] and (best is None or abs(s[i][t]) < best[0]):
                    best = (abs(s[i][t]), i, t)
            for j in range(t, nc):
                if s[t][j] and (best is None or abs(s[t][j]) < best[0]):
                    best = (abs(s[t][j]), t, j)
            _, i, j = best
            row_swap(t, i)
            col_swap(t, j)
        if s[t][t] < 0:
            row_neg(t)
        t += 1
    return U, Ui, s, V, Vi


def smith_normal_form(A: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """``(U, D, V)`` with ``A = U D V``, ``U`` and ``V`` unimodular and ``D``
    diagonal with nonnegative, divisibility ordered entries."""
    U, _, D, V, _ = _smith_full(A.to_dense(), A.ncols)
    return (IntMatrix.from_dense(U, A.nrows), IntMatrix.from_dense(D, A.ncols),
            IntMatrix.from_dense(V, A.ncols))


def smith_with_inverses(A: IntMatrix):
    """``(U, Uinv, D, V, Vinv)`` as IntMatrices."""
    U, Ui, D, V, Vi = _smith_full(A.to_dense(), A.ncols)
    return (IntMatrix.from_dense(U, A.nrows), IntMatrix.from_dense(Ui, A.nrows),
            IntMatrix.from_dense(D, A.ncols), IntMatrix.from_dense(V, A.ncols),
            IntMatrix.from_dense(Vi, A.ncols))


# -- fast invariant factors --------------------------------------------------

def _sparse_unit_phase(rows: list[dict[int, int]], modulus: int | None):
    """Eliminate on unit pivots, removing pivot rows and columns.

    Returns ``(number of unit pivots, remaining rows)``.  A unit pivot
    contributes an invariant factor 1; column operations clearing its row
    touch nothing else once its column has been cleared.
    """
    rows = {r: row for r, row in enumerate(rows) if row}
    cols: dict[int, set[int]] = defaultdict(set)
    for r, row in rows.items():
        for c in row:
            cols[c].add(r)
    heap = [(len(s), c) for c, s in cols.items()]
    heapq.heapify(heap)
    units = 0
    while heap:
        cnt, c = heapq.heappop(heap)
        s = cols.get(c)
        if not s:
            continue
        if len(s) != cnt:
            heapq.heappush(heap, (len(s), c))
            continue
        best = None
        blen = 0
        for r in s:
            v = rows[r][c]
            if v == 1 or v == -1:
                ln = len(rows[r])
                if best is None or ln < blen:
                    best, blen = r, ln
        if best is None:
            continue
        prow = rows.pop(best)
        pv = prow[c]
        touched = set()
        for r in list(s):
            if r == best:
                continue
            row = rows[r]
            f = row[c] * pv
            for cc, vv in prow.items():
                nv = row.get(cc, 0) - f * vv
                if modulus:
                    nv %= modulus
                if nv:
                    if cc not in row:
                        cols[cc].add(r)
                        touched.add(cc)
                    row[cc] = nv
                elif cc in row:
                    del row[cc]
                    cols[cc].discard(r)
                    touched.add(cc)
        for cc in prow:
            cols[cc].discard(best)
            touched.add(cc)
        del cols[c]
        touched.discard(c)
        for cc in touched:
            if cols[cc]:
                heapq.heappush(heap, (len(cols[cc]), cc))
        units += 1
    return units, [row for row in rows.values() if row]


def _dense_core(rows: list[dict[int, int]]):
    colset = sorted({c for row in rows for c in row})
    pos = {c: j for j, c in enumerate(colset)}
    dense = [[0] * len(colset) for _ in rows]
    for i, row in enumerate(rows):
        for c, v in row.items():
            dense[i][pos[c]] = v
    return dense


def invariant_factors(A: IntMatrix, ring: str = "Z") -> list[int]:
    """Nonzero diagonal of the Smith form of ``A`` over ``ring``.

    Over a field every factor is 1 and the length is the rank.
    """
    if ring not in RINGS:
        raise ValueError(f"unknown ring {ring!r}")
    if ring == "Z2":
        rows = [{c: v % 2 for c, v in row.items() if v % 2} for row in A.rows.values()]
        units, rest = _sparse_unit_phase(rows, 2)
        if rest:
            if _backend.BACKEND == "cython":
                units += _backend.gf2_rank(_dense_core(rest))
            else:
                bits = []
                for row in rest:
                    b = 0
                    for c in row:
                        b |= 1 << c
                    bits.append(b)
                units += _backend.kernels.gf2_rank_bits(bits) if hasattr(_backend.kernels, "gf2_rank_bits") \
                    else _backend.gf2_rank(_dense_core(rest))
        return [1] * units
    rows = [dict(row) for row in A.rows.values()]
    units, rest = _sparse_unit_phase(rows, None)
    core: list[int] = []
    if rest:
        core = _backend.normalize_diagonal(_backend.snf_diagonal(_dense_core(rest)))
    if ring == "Q":
        return [1] * (units + len(core))
    return [1] * units + core


def rank(A: IntMatrix, ring: str = "Z") -> int:
    return len(invariant_factors(A, ring))


def right_inverse(A: IntMatrix) -> IntMatrix:
    """Integer matrix ``S`` with ``A S = I``; requires all invariant factors 1
    and full row rank."""
    U, Ui, D, V, Vi = _smith_full(A.to_dense(), A.ncols)
    r = A.nrows
    for i in range(r):
        if i >= A.ncols or D[i][i] != 1:
            raise ValueError("matrix has no integral right inverse")
    # A = U D V, D = [I | 0]; S = Vinv [Uinv; 0]
    top = [list(row) for row in Ui] + [[0] * r for _ in range(A.ncols - r)]
    Vim = IntMatrix.from_dense(Vi, A.ncols)
    return Vim @ IntMatrix.from_dense(top, r)
