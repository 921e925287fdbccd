"""Ranks of maps induced on homology over a field, and long exact sequences.

Fields are ``"Z2"`` (arithmetic mod 2) and ``"Q"`` (exact fractions).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import NotAChainMap
from .complexes import ChainComplex, ChainMap, cone
from .matrix import IntMatrix, block_matrix


def _norm(x, fld):
    return x % 2 if fld == "Z2" else Fraction(x)


def _rank_cols(cols: list[list], fld) -> int:
    """Rank of a list of dense column vectors."""
    if not cols:
        return 0
    rows = [list(r) for r in zip(*cols)]
    return _rank_rows(rows, fld)


def _rank_rows(rows: list[list], fld) -> int:
    rows = [[_norm(x, fld) for x in r] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr = rows[rank]
        inv = 1 if fld == "Z2" else 1 / pr[c]
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                f = rows[r][c] * inv
                row = rows[r]
                for k in range(c, ncols):
                    if pr[k]:
                        row[k] = row[k] - f * pr[k]
                        if fld == "Z2":
                            row[k] %= 2
        rank += 1
    return rank


def _nullspace(M: IntMatrix, fld) -> list[list]:
    """Basis of ``ker M`` as dense vectors of length ``M.ncols``."""
    n = M.ncols
    rows = [[_norm(x, fld) for x in r] for r in M.to_dense()]
    pivots = []
    rank = 0
    for c in range(n):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr = rows[rank]
        inv = 1 if fld == "Z2" else 1 / pr[c]
        rows[rank] = pr = [(x * inv) % 2 if fld == "Z2" else x * inv for x in pr]
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                f = rows[r][c]
                rows[r] = [(a - f * b) % 2 if fld == "Z2" else a - f * b for a, b in zip(rows[r], pr)]
        pivots.append(c)
        rank += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [_norm(0, fld)] * n
        v[fc] = _norm(1, fld)
        for r, pc in enumerate(pivots):
            val = -rows[r][fc]
            v[pc] = val % 2 if fld == "Z2" else val
        basis.append(v)
    return basis


def _restrict(C: ChainComplex, j: int, k: int) -> list[int]:
    return [i for i, q in enumerate(C.qdeg.get(j, ())) if q == k]


def _sub(M: IntMatrix, rows, cols) -> IntMatrix:
    return M.submatrix(rows, cols)


def homology_dim(C: ChainComplex, j: int, k: int, fld: str) -> int:
    cols = _restrict(C, j, k)
    out = _restrict(C, j + 1, k)
    inn = _restrict(C, j - 1, k)
    r_out = _rank_rows(_sub(C.diff(j), out, cols).to_dense(), fld) if out and cols else 0
    r_in = _rank_rows(_sub(C.diff(j - 1), cols, inn).to_dense(), fld) if cols and inn else 0
    return len(cols) - r_out - r_in


def induced_rank(f: ChainMap, j: int, k: int, fld: str) -> int:
    """Rank of ``H^{j,k}(source) -> H^{j,k+deg}(target)`` over ``fld``."""
    S, T = f.source, f.target
    sc = _restrict(S, j, k)
    if not sc:
        return 0
    tk = k + f.degree
    tc = _restrict(T, j, tk)
    if not tc:
        return 0
    s_out = _restrict(S, j + 1, k)
    Z = _nullspace(_sub(S.diff(j), s_out, sc), fld) if s_out else \
        [[_norm(int(a == b), fld) for a in range(len(sc))] for b in range(len(sc))]
    F = _sub(f.component(j), tc, sc).to_dense()
    images = [[sum(F[r][c] * z[c] for c in range(len(sc))) for r in range(len(tc))] for z in Z]
    t_in = _restrict(T, j - 1, tk)
    B = []
    if t_in:
        D = _sub(T.diff(j - 1), tc, t_in).to_dense()
        B = [[D[r][c] for r in range(len(tc))] for c in range(len(t_in))]
    return _rank_cols(images + B, fld) - _rank_cols(B, fld)


def compose(g: ChainMap, f: ChainMap) -> ChainMap:
    """``g after f``."""
    degs = set(f.maps) | set(g.maps)
    maps = {j: g.component(j) @ f.component(j) for j in degs}
    return ChainMap(f.source, g.target, maps, f.degree + g.degree)


def cone_maps(f: ChainMap):
    """``(Cone, iota: D -> Cone, pi: Cone -> C[1])`` for ``f: C -> D``."""
    Cn = cone(f)
    C, D = f.source, f.target
    C1 = C.shifted(1, 0)
    iota, pi = {}, {}
    for j in Cn.qdeg:
        a, b = C.dim(j + 1), D.dim(j)
        if b:
            iota[j] = block_matrix([[None], [IntMatrix.identity(b)]], [a, b], [b])
        if a:
            pi[j] = block_matrix([[IntMatrix.identity(a), None]], [a], [a, b])
    return Cn, ChainMap(D, Cn, iota), ChainMap(Cn, C1, pi)


@dataclass
class ExactnessReport:
    field: str
    nodes: list = field(default_factory=list)     # (label, j, k, dim, rank_in, rank_out, exact)

    @property
    def exact(self) -> bool:
        return all(n[-1] for n in self.nodes)


def long_exact_sequence(f: ChainMap, fld: str = "Z2", check: bool = True) -> ExactnessReport:
    """Check ``... -> H^j(C) -> H^j(D) -> H^j(Cone) -> H^{j+1}(C) -> ...``
    at every node by ranks: ``rank(in) + rank(out) = dim`` and both
    composites vanish on homology."""
    if f.degree != 0:
        raise NotAChainMap("the long exact sequence needs a degree zero map")
    if check:
        f.check()
    Cn, iota, pi = cone_maps(f)
    if check:
        iota.check()
        pi.check()
    C, D = f.source, f.target
    fpi = compose(ChainMap(C.shifted(1, 0), D.shifted(1, 0), {j - 1: f.component(j) for j in f.maps}), pi)
    iof = compose(iota, f)
    pii = compose(pi, iota)
    rep = ExactnessReport(fld)
    ks = {k for X in (C, D, Cn) for v in X.qdeg.values() for k in v}
    js = set(C.qdeg) | {j - 1 for j in C.qdeg} | set(D.qdeg) | set(Cn.qdeg)
    for k in sorted(ks):
        for j in sorted(js | {j + 1 for j in js}):
            # node H^j(D): in f_j, out iota_j
            dimD = homology_dim(D, j, k, fld)
            rin, rout = induced_rank(f, j, k, fld), induced_rank(iota, j, k, fld)
            ok = rin + rout == dimD and induced_rank(iof, j, k, fld) == 0
            rep.nodes.append(("D", j, k, dimD, rin, rout, ok))
            # node H^j(Cone): in iota_j, out pi_j
            dimK = homology_dim(Cn, j, k, fld)
            rin2, rout2 = rout, induced_rank(pi, j, k, fld)
            ok = rin2 + rout2 == dimK and induced_rank(pii, j, k, fld) == 0
            rep.nodes.append(("Cone", j, k, dimK, rin2, rout2, ok))
            # node H^{j+1}(C): in pi_j, out f_{j+1}
            dimC = homology_dim(C, j + 1, k, fld)
            rin3, rout3 = rout2, induced_rank(f, j + 1, k, fld)
            ok = rin3 + rout3 == dimC and induced_rank(fpi, j, k, fld) == 0
            rep.nodes.append(("C", j + 1, k, dimC, rin3, rout3, ok))
    return rep
