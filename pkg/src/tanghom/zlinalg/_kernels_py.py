"""Pure-Python versions of the dense kernels in ``_kernels.pyx``.

Both modules expose the same functions with the same semantics; the
compiled one is preferred when it is importable.
"""
from __future__ import annotations

from math import gcd

INT64_LIMIT = (1 << 62)


def gf2_rank(a) -> int:
    """Rank over Z/2 of a dense 0/1 matrix (any 2D array of ints)."""
    rows = []
    for row in a:
        bits = 0
        for j, v in enumerate(row):
            if int(v) & 1:
                bits |= 1 << j
        if bits:
            rows.append(bits)
    return gf2_rank_bits(rows)


def gf2_rank_bits(rows: list[int]) -> int:
    """Rank over Z/2 of rows given as int bitsets."""
    pivots: dict[int, int] = {}
    rank = 0
    for r in rows:
        while r:
            h = r.bit_length() - 1
            p = pivots.get(h)
            if p is None:
                pivots[h] = r
                rank += 1
                break
            r ^= p
    return rank


def snf_diagonal(a, check_overflow: bool = True) -> list[int]:
    """Nonzero diagonal of a diagonalization of a dense integer matrix.

    The entries are positive but not necessarily divisibility ordered; use
    :func:`normalize_diagonal` for invariant factors.  With
    ``check_overflow`` the computation raises ``OverflowError`` as soon as an
    entry leaves the signed 63-bit range, mirroring the compiled kernel.
    """
    m = [[int(v) for v in row] for row in a]
    out: list[int] = []
    nr = len(m)
    nc = len(m[0]) if nr else 0
    active_rows = list(range(nr))
    active_cols = list(range(nc))
    while True:
        best = None
        for i in active_rows:
            row = m[i]
            for j in active_cols:
                v = row[j]
                if v:
                    av = -v if v < 0 else v
                    if best is None or av < best[0]:
                        best = (av, i, j)
                        if av == 1:
                            break
            if best is not None and best[0] == 1:
                break
        if best is None:
            return out
        _, pi, pj = best
        while True:
            p = m[pi][pj]
            done = True
            for i in active_rows:
                if i == pi:
                    continue
                v = m[i][pj]
                if v:
                    q = v // p
                    if q:
                        prow, row = m[pi], m[i]
                        for j in active_cols:
                            if prow[j]:
                                row[j] -= q * prow[j]
                                if check_overflow and not -INT64_LIMIT < row[j] < INT64_LIMIT:
                                    raise OverflowError("entry left the int64 range")
                    if m[i][pj]:
                        done = False
            for j in active_cols:
                if j == pj:
                    continue
                v = m[pi][j]
                if v:
                    q = v // p
                    if q:
                        for i in active_rows:
                            w = m[i][pj]
                            if w:
                                m[i][j] -= q * w
                                if check_overflow and not -INT64_LIMIT < m[i][j] < INT64_LIMIT:
                                    raise OverflowError("entry left the int64 range")
                    if m[pi][j]:
                        done = False
            if done:
                break
            # move the pivot to the smallest nonzero entry of its row/column
            best = (abs(m[pi][pj]), pi, pj)
            for i in active_rows:
                v = m[i][pj]
                if v and abs(v) < best[0]:
                    best = (abs(v), i, pj)
            for j in active_cols:
                v = m[pi][j]
                if v and abs(v) < best[0]:
                    best = (abs(v), pi, j)
            _, pi, pj = best
        out.append(abs(m[pi][pj]))
        active_rows.remove(pi)
        active_cols.remove(pj)


def normalize_diagonal(diag: list[int]) -> list[int]:
    """Invariant factors (divisibility ordered) of ``diag(d_1, ..., d_r)``."""
    d = sorted(abs(x) for x in diag if x)
    n = len(d)
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(i + 1, n):
                a, b = d[i], d[j]
                if b % a:
                    g = gcd(a, b)
                    d[i], d[j] = g, a // g * b
                    changed = True
        d.sort()
    return d
