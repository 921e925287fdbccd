"""Bigraded free modules, cochain complexes, homology, cones and tensor products.

Complexes are cohomological: ``d_j`` maps degree ``j`` to ``j + 1``.  Every
basis element carries a quantum degree and differentials preserve it.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Hashable, Sequence

from ..errors import DifferentialNotSquareZero, NotAChainMap
from .matrix import IntMatrix, block_matrix
from .snf import RINGS, invariant_factors, smith_with_inverses


@dataclass(frozen=True)
class GradedFreeModule:
    """Free abelian group with a basis of labels of bidegree ``(j, k)``."""

    labels: tuple[Hashable, ...]
    degrees: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if len(self.labels) != len(self.degrees):
            raise ValueError("labels and degrees differ in length")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("basis labels must be distinct")

    @property
    def rank(self) -> int:
        return len(self.labels)

    def shifted(self, dj: int = 0, dk: int = 0) -> "GradedFreeModule":
        """``[dj]{dk}`` in the cohomological convention: ``C[1]^j = C^{j+1}``,
        so ``[dj]`` lowers homological degrees by ``dj``; ``{dk}`` raises the
        quantum degree by ``dk``."""
        return GradedFreeModule(self.labels, tuple((j - dj, k + dk) for j, k in self.degrees))

    def graded_dims(self) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = defaultdict(int)
        for d in self.degrees:
            out[d] += 1
        return dict(out)


class ChainComplex:
    """Terms ``C^j`` with quantum degrees and differentials ``d_j: C^j -> C^{j+1}``.

    ``qdeg[j]`` lists the quantum degree of each basis element of ``C^j``;
    ``d[j]`` has shape ``(dim C^{j+1}, dim C^j)``; missing entries are zero.
    """

    def __init__(self, qdeg: dict[int, Sequence[int]], d: dict[int, IntMatrix] | None = None,
                 labels: dict[int, Sequence[Any]] | None = None, check: bool = True):
        self.qdeg = {j: list(v) for j, v in qdeg.items() if len(v)}
        self.labels = {j: list(labels[j]) for j in self.qdeg} if labels else None
        self.d: dict[int, IntMatrix] = {}
        for j, m in (d or {}).items():
            src, tgt = self.dim(j), self.dim(j + 1)
            if m.shape != (tgt, src):
                raise ValueError(f"d_{j} has shape {m.shape}, expected {(tgt, src)}")
            if not m.is_zero():
                self.d[j] = m
        if check:
            self.check()

    def dim(self, j: int) -> int:
        return len(self.qdeg.get(j, ()))

    def degrees(self) -> list[int]:
        return sorted(self.qdeg)

    def diff(self, j: int) -> IntMatrix:
        return self.d.get(j) or IntMatrix(self.dim(j + 1), self.dim(j))

    def total_rank(self) -> int:
        return sum(len(v) for v in self.qdeg.values())

    def graded_dims(self) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = defaultdict(int)
        for j, ks in self.qdeg.items():
            for k in ks:
                out[(j, k)] += 1
        return dict(out)

    def check(self):
        for j, m in self.d.items():
            qs, qt = self.qdeg[j], self.qdeg.get(j + 1, [])
            for r, row in m.rows.items():
                for c in row:
                    if qt[r] != qs[c]:
                        raise DifferentialNotSquareZero(
                            f"d_{j} does not preserve quantum degree ({qs[c]} -> {qt[r]})")
            nxt = self.d.get(j + 1)
            if nxt is not None and not (nxt @ m).is_zero():
                raise DifferentialNotSquareZero(f"d_{j + 1} d_{j} != 0")

    def shifted(self, dj: int = 0, dk: int = 0) -> "ChainComplex":
        """``C[dj]{dk}`` (see :meth:`GradedFreeModule.shifted`); the
        differential picks up the sign ``(-1)^dj``."""
        sign = -1 if dj % 2 else 1
        return ChainComplex({j - dj: [k + dk for k in ks] for j, ks in self.qdeg.items()},
                            {j - dj: m.scale(sign) if sign < 0 else m for j, m in self.d.items()},
                            {j - dj: v for j, v in self.labels.items()} if self.labels else None,
                            check=False)

    def split_by_quantum(self, j: int) -> dict[int, list[int]]:
        out: dict[int, list[int]] = defaultdict(list)
        for i, k in enumerate(self.qdeg.get(j, ())):
            out[k].append(i)
        return out


@dataclass
class ChainMap:
    source: ChainComplex
    target: ChainComplex
    maps: dict[int, IntMatrix]
    degree: int = 0          # quantum degree of the map

    def component(self, j: int) -> IntMatrix:
        return self.maps.get(j) or IntMatrix(self.target.dim(j), self.source.dim(j))

    def check(self):
        for j, m in self.maps.items():
            if m.shape != (self.target.dim(j), self.source.dim(j)):
                raise NotAChainMap(f"component {j} has shape {m.shape}")
            qs, qt = self.source.qdeg.get(j, []), self.target.qdeg.get(j, [])
            for r, row in m.rows.items():
                for c in row:
                    if qt[r] != qs[c] + self.degree:
                        raise NotAChainMap(f"component {j} is not of quantum degree {self.degree}")
        for j in set(self.source.qdeg) | set(self.target.qdeg) | {j + 1 for j in self.source.qdeg}:
            lhs = self.target.diff(j) @ self.component(j)
            rhs = self.component(j + 1) @ self.source.diff(j)
            if lhs != rhs:
                raise NotAChainMap(f"f d != d f in degree {j}")
        return True


# -- homology ----------------------------------------------------------------

@dataclass
class HomologyReport:
    """Bigraded homology: ``groups[(j, k)] = (free rank, torsion factors)``."""

    groups: dict[tuple[int, int], tuple[int, tuple[int, ...]]]
    ring: str = "Z"
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.groups = {key: (int(r), tuple(t)) for key, (r, t) in self.groups.items() if r or t}

    def ranks(self) -> dict[tuple[int, int], int]:
        return {key: r for key, (r, _) in self.groups.items() if r}

    def torsion(self) -> dict[tuple[int, int], tuple[int, ...]]:
        return {key: t for key, (_, t) in self.groups.items() if t}

    def total_rank(self) -> int:
        return sum(r for r, _ in self.groups.values())

    def poincare(self) -> dict[tuple[int, int], int]:
        return self.ranks()

    def poincare_string(self) -> str:
        terms = []
        for (j, k), r in sorted(self.ranks().items()):
            mono = "".join(p for p in (_power("t", j), _power("q", k)) if p) or "1"
            terms.append(mono if r == 1 else f"{r}*{mono}")
        return " + ".join(terms) if terms else "0"

    def euler(self) -> dict[int, int]:
        out: dict[int, int] = defaultdict(int)
        for (j, k), r in self.ranks().items():
            out[k] += (-1) ** (j % 2) * r
        return {k: v for k, v in out.items() if v}

    def __eq__(self, other):
        return isinstance(other, HomologyReport) and self.groups == other.groups and self.ring == other.ring


def _power(var, e):
    if e == 0:
        return ""
    if e == 1:
        return var
    return f"{var}^{e}" if e > 0 else f"{var}^({e})"


def _block_factors(C: ChainComplex, j: int, k: int, ring: str, rows_k, cols_k):
    m = C.d.get(j)
    if m is None or not rows_k or not cols_k:
        return []
    return invariant_factors(m.submatrix(rows_k, cols_k), ring)


def homology(C: ChainComplex, ring: str = "Z", check: bool = True) -> HomologyReport:
    """Exact homology of every bidegree."""
    if ring not in RINGS:
        raise ValueError(f"unknown ring {ring!r}")
    if check:
        C.check()
    groups = {}
    split = {j: C.split_by_quantum(j) for j in C.qdeg}
    factors: dict[tuple[int, int], list[int]] = {}
    for j, byk in split.items():
        nxt = split.get(j + 1, {})
        for k, cols in byk.items():
            factors[(j, k)] = _block_factors(C, j, k, ring, nxt.get(k, []), cols)
    for j, byk in split.items():
        for k, cols in byk.items():
            out_f = factors.get((j, k), [])
            in_f = factors.get((j - 1, k), [])
            free = len(cols) - len(out_f) - len(in_f)
            tors = tuple(f for f in in_f if f > 1) if ring == "Z" else ()
            groups[(j, k)] = (free, tors)
    return HomologyReport(groups, ring)


# -- cone and tensor -----------------------------------------------------------

def cone(f: ChainMap, check: bool = True) -> ChainComplex:
    """``Cone(f)^j = C^{j+1} (+) D^j`` with ``d = [[-d_C, 0], [f, d_D]]``."""
    if check:
        f.check()
    if f.degree != 0:
        raise NotAChainMap("cone needs a quantum degree 0 map")
    C, D = f.source, f.target
    degs = sorted({j - 1 for j in C.qdeg} | set(D.qdeg))
    qdeg, labels, d = {}, {}, {}
    for j in degs:
        qdeg[j] = C.qdeg.get(j + 1, []) + D.qdeg.get(j, [])
        labels[j] = [("C", x) for x in range(C.dim(j + 1))] + [("D", x) for x in range(D.dim(j))]
    for j in degs:
        if j + 1 not in qdeg:
            continue
        blk = [[-C.diff(j + 1), None], [f.component(j + 1), D.diff(j)]]
        d[j] = block_matrix(blk, [C.dim(j + 2), D.dim(j + 1)], [C.dim(j + 1), D.dim(j)])
    return ChainComplex(qdeg, d, labels, check=check)


def tensor_complexes(C: ChainComplex, D: ChainComplex, check: bool = True) -> ChainComplex:
    """Total complex with ``d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy``."""
    qdeg: dict[int, list[int]] = defaultdict(list)
    labels: dict[int, list] = defaultdict(list)
    index: dict[tuple, tuple[int, int]] = {}
    for i in sorted(C.qdeg):
        for j in sorted(D.qdeg):
            n = i + j
            for a, ka in enumerate(C.qdeg[i]):
                for b, kb in enumerate(D.qdeg[j]):
                    index[(i, a, j, b)] = (n, len(qdeg[n]))
                    qdeg[n].append(ka + kb)
                    labels[n].append((i, a, j, b))
    entries: dict[int, list] = defaultdict(list)
    for (i, a, j, b), (n, pos) in index.items():
        dc = C.d.get(i)
        if dc is not None:
            for r, row in dc.rows.items():
                v = row.get(a)
                if v:
                    entries[n].append((index[(i + 1, r, j, b)][1], pos, v))
        dd = D.d.get(j)
        if dd is not None:
            sign = -1 if i % 2 else 1
            for r, row in dd.rows.items():
                v = row.get(b)
                if v:
                    entries[n].append((index[(i, a, j + 1, r)][1], pos, sign * v))
    d = {n: IntMatrix.from_entries(len(qdeg.get(n + 1, [])), len(qdeg[n]), ents)
         for n, ents in entries.items()}
    return ChainComplex(dict(qdeg), d, dict(labels), check=check)


# -- cokernels -----------------------------------------------------------------

@dataclass
class CokerResult:
    free_rank: int
    projection: IntMatrix             # F -> Z^free_rank
    torsion: list[int]


def coker_presentation(R: IntMatrix) -> CokerResult:
    """Cokernel of ``R: Z^r -> F`` (shape ``(dim F, r)``).

    With ``R = U D V`` the cokernel is read off in the coordinates ``U^-1 f``:
    the rows of ``U^-1`` past the rank project onto the free part.
    """
    n = R.nrows
    U, Ui, D, V, Vi = smith_with_inverses(R)
    diag = [D[i, i] for i in range(min(D.nrows, D.ncols))]
    rk = sum(1 for x in diag if x)
    torsion = [x for x in diag if x > 1]
    proj = Ui.submatrix(list(range(rk, n)), list(range(n)))
    return CokerResult(n - rk, proj, torsion)
