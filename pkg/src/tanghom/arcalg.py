"""The arc algebras H^m.

``_aH^m_b = F(a^t b){m}``; the basis of a block is every labeling of the
circles of ``a^t b``.  Products come from the minimal cobordism ``S_b``.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache

from .frobenius import label_degree, normalize_coeff
from .planar import CrossinglessMatching, enumerate_matchings
from .tqft import closure, compose_program, identity_tangle

Poly = dict  # quantum degree -> rank


@dataclass(frozen=True)
class MinimalCobordismPlan:
    """Saddles of ``S_b`` as arcs of ``b``, in the order they are performed."""

    b: CrossinglessMatching
    arcs: tuple[tuple[int, int], ...]


def minimal_plan(b: CrossinglessMatching, order: str = "outer") -> MinimalCobordismPlan:
    arcs = sorted(b.pairs, key=lambda pq: pq[1] - pq[0], reverse=(order == "outer"))
    return MinimalCobordismPlan(b, tuple(arcs))


@dataclass(frozen=True)
class ArcAlgebraElement:
    algebra: "ArcAlgebra"
    coeffs: tuple[tuple[int, int], ...]      # (basis index, coefficient)

    def __mul__(self, other: "ArcAlgebraElement") -> "ArcAlgebraElement":
        return self.algebra.element(self.algebra.multiply(dict(self.coeffs), dict(other.coeffs)))

    def __add__(self, other):
        acc = dict(self.coeffs)
        for i, c in other.coeffs:
            acc[i] = acc.get(i, 0) + c
        return self.algebra.element(acc)

    def is_zero(self):
        return not self.coeffs

    def __str__(self):
        A = self.algebra
        return " + ".join(f"{c}*[{A.basis[i][0]}|{A.basis[i][1]}|{A.basis[i][2]:b}]" for i, c in self.coeffs) or "0"


class ArcAlgebra:
    """Basis, gradings and structure constants of ``H^m``."""

    def __init__(self, m: int):
        if m < 0:
            raise ValueError("m must be non-negative")
        self.m = m
        self.F = identity_tangle(m)
        self.matchings = enumerate_matchings(m)
        self.k: dict[tuple, int] = {}
        self.offset: dict[tuple, int] = {}
        self.basis: list[tuple] = []
        for a in self.matchings:
            for b in self.matchings:
                k = closure(self.F, a, b).k
                self.k[(a, b)] = k
                self.offset[(a, b)] = len(self.basis)
                self.basis.extend((a, b, bits) for bits in range(1 << k))
        self.index = {x: i for i, x in enumerate(self.basis)}
        self._tables: dict = {}

    @property
    def rank(self) -> int:
        return len(self.basis)

    def degree(self, i: int) -> int:
        a, b, bits = self.basis[i]
        return label_degree(bits, self.k[(a, b)]) + self.m

    def block_rank(self, a, b) -> int:
        return 1 << self.k[(a, b)]

    def graded_dims(self) -> Poly:
        out: Poly = defaultdict(int)
        for i in range(self.rank):
            out[self.degree(i)] += 1
        return dict(out)

    def idempotent(self, a) -> ArcAlgebraElement:
        return self.element({self.index[(a, a, 0)]: 1})

    def unit(self) -> ArcAlgebraElement:
        return self.element({self.index[(a, a, 0)]: 1 for a in self.matchings})

    def element(self, coeffs: dict, ring: str = "Z") -> ArcAlgebraElement:
        clean = {}
        for i, c in coeffs.items():
            c = normalize_coeff(c, ring)
            if c:
                clean[i] = c
        return ArcAlgebraElement(self, tuple(sorted(clean.items())))

    def basis_element(self, a, b, bits) -> ArcAlgebraElement:
        return self.element({self.index[(a, b, bits)]: 1})

    def multiply_basis(self, i: int, j: int, order: str = "outer") -> dict[int, int]:
        a, b, x = self.basis[i]
        c, d, y = self.basis[j]
        if b != c:
            return {}
        prog = compose_program(self.F, self.F, a, b, d, order)
        k1 = self.k[(a, b)]
        off = self.offset[(a, d)]
        return {off + t: v for t, v in prog(x | (y << k1)).items()}

    def multiply(self, u: dict, v: dict, ring: str = "Z", order: str = "outer") -> dict[int, int]:
        out: dict[int, int] = {}
        for i, a in u.items():
            for j, b in v.items():
                for t, c in self.multiply_basis(i, j, order).items():
                    out[t] = out.get(t, 0) + a * b * c
        return {t: c for t, c in ((t, normalize_coeff(c, ring)) for t, c in out.items()) if c}

    def structure_table(self, ring: str = "Z", order: str = "outer") -> dict:
        """``{(i, j): {t: c}}`` over all composable basis pairs."""
        key = (ring, order)
        if key not in self._tables:
            table = {}
            for i, (a, b, _) in enumerate(self.basis):
                for d in self.matchings:
                    off = self.offset[(b, d)]
                    for j in range(off, off + self.block_rank(b, d)):
                        prod = self.multiply_basis(i, j, order)
                        prod = {t: normalize_coeff(c, ring) for t, c in prod.items()}
                        table[(i, j)] = {t: c for t, c in prod.items() if c}
            self._tables[key] = table
        return self._tables[key]

    def to_json(self, ring: str = "Z") -> dict:
        """Structure constants in a form suited to ``json.dump``."""
        return {
            "m": self.m,
            "basis": [{"a": list(map(list, a.pairs)), "b": list(map(list, b.pairs)), "label": bits,
                       "degree": self.degree(i)} for i, (a, b, bits) in enumerate(self.basis)],
            "products": [{"x": i, "y": j, "result": sorted(v.items())}
                         for (i, j), v in sorted(self.structure_table(ring).items()) if v],
        }


@lru_cache(maxsize=None)
def build_arc_algebra(m: int) -> ArcAlgebra:
    return ArcAlgebra(m)


# --------------------------------------------------------------------------
# recursive decomposition
# --------------------------------------------------------------------------

def _vpow(k: int, shift: int) -> Poly:
    """Graded dimension of ``V^{(x)k}{shift}``."""
    from math import comb
    return {shift + 2 * j - k: comb(k, j) for j in range(k + 1)}


def _padd(p: Poly, q: Poly, scale: int = 1) -> Poly:
    out = dict(p)
    for d, c in q.items():
        out[d] = out.get(d, 0) + scale * c
    return {d: c for d, c in out.items() if c}


def pmul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for d1, c1 in p.items():
        for d2, c2 in q.items():
            out[d1 + d2] = out.get(d1 + d2, 0) + c1 * c2
    return {d: c for d, c in out.items() if c}


def pshift(p: Poly, s: int) -> Poly:
    return {d + s: c for d, c in p.items()}


def V(shift: int = 0) -> Poly:
    return {shift - 1: 1, shift + 1: 1}


def _circle_through(F, a, b, i):
    """Indices of the circles of ``a^t b`` through the bottom points i, i+1."""
    cl = closure(F, a, b)
    hit = set()
    for (u, v, _), c in zip(cl.edges, cl.circle):
        if u in (("B", i), ("B", i + 1)) or v in (("B", i), ("B", i + 1)):
            hit.add(c)
    return hit


@dataclass
class DecompositionCertificate:
    m: int
    site: int
    summands: dict[str, Poly]
    lhs: Poly
    rhs: Poly

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def decomposition_summands(m: int, i: int = 1) -> dict[str, Poly]:
    """Graded dimensions of ``H^{m-1}``, ``H-bar`` (twice), ``H_1`` and ``H_2``
    at the site ``i``, from the classification of pairs ``(a, b)``."""
    if m < 1:
        raise ValueError("m must be at least 1")
    F = identity_tangle(m)
    lower = build_arc_algebra(m - 1)
    parts = {"H^{m-1}": {}, "Hbar'": {}, "Hbar''": {}, "H_1": {}, "H_2": {}}
    for a in enumerate_matchings(m):
        for b in enumerate_matchings(m):
            k = closure(F, a, b).k
            ca, cb = a.has_arc(i), b.has_arc(i)
            if ca and cb:
                ab, bb = a.remove_arc(i), b.remove_arc(i)
                kk = lower.k[(ab, bb)]
                if kk != k - 1:
                    raise AssertionError("removing the arc at the site should remove one circle")
                parts["H^{m-1}"] = _padd(parts["H^{m-1}"], _vpow(kk, m - 1))
            elif ca or cb:
                name = "Hbar'" if ca else "Hbar''"
                parts[name] = _padd(parts[name], _vpow(k - 1, m - 1))
            else:
                through = _circle_through(F, a, b, i)
                if len(through) == 1:
                    parts["H_1"] = _padd(parts["H_1"], _vpow(k - 1, m - 1))
                else:
                    parts["H_2"] = _padd(parts["H_2"], _vpow(k - 2, m - 2))
    return parts


def check_decomposition(m: int, i: int = 1) -> DecompositionCertificate:
    """Compare ``gdim H^m`` with the five-summand decomposition at site ``i``."""
    parts = decomposition_summands(m, i)
    first = {}
    for name in ("H^{m-1}", "Hbar'", "Hbar''", "H_1"):
        first = _padd(first, parts[name])
    rhs = _padd(pmul(first, V(1)), pmul(parts["H_2"], pmul(V(1), V(1))))
    return DecompositionCertificate(m, i, parts, build_arc_algebra(m).graded_dims(), rhs)


def _first_four(parts: dict[str, Poly]) -> Poly:
    out: Poly = {}
    for name in ("H^{m-1}", "Hbar'", "Hbar''", "H_1"):
        out = _padd(out, parts[name])
    return out


def capcup_closed_form(m: int, i: int) -> Poly:
    """Graded dimension of ``Kh(cup_{i;m} cap_{i;m})`` from the summands:
    ``(first four) (x) V{1} (x) V  (+)  H_2 (x) V{2}``."""
    parts = decomposition_summands(m, i)
    return _padd(pmul(_first_four(parts), pmul(V(1), V(0))), pmul(parts["H_2"], V(2)))


def crossing_closed_form(m: int, i: int, kind: str) -> Poly:
    """Collapsed graded dimension of a crossing from the summands:
    ``(first four) (x) V{-1} (+) H_2 (x) V{2}`` for ``s+`` and
    ``(first four) (x) V{3} (+) H_2 (x) V{2}`` for ``s-``."""
    parts = decomposition_summands(m, i)
    shift = -1 if kind == "s+" else 3
    return _padd(pmul(_first_four(parts), V(shift)), pmul(parts["H_2"], V(2)))
