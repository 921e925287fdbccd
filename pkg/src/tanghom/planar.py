"""Planar combinatorics: crossingless matchings, elementary tangles and words.

Conventions
-----------
* Boundary points are numbered ``1 .. 2m`` from left to right.
* A word lists its generators bottom-to-top.  ``Cup(i, m)`` turns ``2m-2``
  points into ``2m`` by creating an arc between new points ``i, i+1`` on its
  top; ``Cap(i, m)`` closes points ``i, i+1`` of its ``2m`` bottom points.
* ``SigmaPlus(i, m)`` is the crossing which is positive when both strands
  point upward; ``SigmaMinus`` is its mirror.  Over-strand of ``SigmaPlus``
  runs from bottom ``i`` to top ``i+1``.
* A crossingless matching ``a`` of ``2m`` points has its arcs above the line
  (a stack of caps); ``a^t`` is the mirror stack of cups below the line.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import (
    GeneratorRangeError,
    NotACrossing,
    OrientationConflict,
    PatternMismatch,
    StrandMismatch,
)

ID, CUP, CAP, SPLUS, SMINUS = "id", "cup", "cap", "s+", "s-"
KINDS = (ID, CUP, CAP, SPLUS, SMINUS)


# --------------------------------------------------------------------------
# crossingless matchings
# --------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class CrossinglessMatching:
    """Noncrossing perfect pairing of the points ``1 .. 2n``."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pts = sorted(p for pair in self.pairs for p in pair)
        if pts != list(range(1, 2 * len(self.pairs) + 1)):
            raise ValueError(f"not a perfect matching of 1..{2 * len(self.pairs)}: {self.pairs}")
        for a, b in self.pairs:
            if a >= b:
                raise ValueError("pairs must be written (smaller, larger)")
        for a, b in self.pairs:
            for c, d in self.pairs:
                if a < c < b < d:
                    raise ValueError(f"arcs {(a, b)} and {(c, d)} cross")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "CrossinglessMatching":
        return cls(tuple(sorted(tuple(sorted(p)) for p in pairs)))

    @property
    def n(self) -> int:
        return len(self.pairs)

    def partner(self, p: int) -> int:
        for a, b in self.pairs:
            if a == p:
                return b
            if b == p:
                return a
        raise KeyError(p)

    def has_arc(self, i: int) -> bool:
        """True when ``(i, i+1)`` is an arc."""
        return (i, i + 1) in self.pairs

    def remove_arc(self, i: int) -> "CrossinglessMatching":
        """Delete the arc ``(i, i+1)`` and renumber (the bijection C'_m -> C_{m-1})."""
        if not self.has_arc(i):
            raise ValueError(f"{self} has no arc ({i}, {i + 1})")
        shift = lambda p: p if p < i else p - 2
        return CrossinglessMatching.from_pairs(
            (shift(a), shift(b)) for a, b in self.pairs if (a, b) != (i, i + 1))

    def join_at(self, i: int) -> "CrossinglessMatching":
        """Join the two arcs through ``i`` and ``i+1`` (the map C''_m -> C_{m-1})."""
        if self.has_arc(i):
            raise ValueError("join_at needs i, i+1 on different arcs")
        p, q = self.partner(i), self.partner(i + 1)
        shift = lambda x: x if x < i else x - 2
        rest = [(shift(a), shift(b)) for a, b in self.pairs if i not in (a, b) and i + 1 not in (a, b)]
        rest.append((shift(p), shift(q)))
        return CrossinglessMatching.from_pairs(rest)

    def cap_word(self) -> tuple["ElementaryGenerator", ...]:
        """Caps closing the ``2n`` points, innermost-leftmost arc first."""
        pts = list(range(1, 2 * self.n + 1))
        pairs = set(self.pairs)
        gens = []
        while pts:
            m = len(pts) // 2
            for k in range(len(pts) - 1):
                if (pts[k], pts[k + 1]) in pairs:
                    gens.append(ElementaryGenerator(CAP, k + 1, m))
                    del pts[k:k + 2]
                    break
        return tuple(gens)

    def cup_word(self) -> tuple["ElementaryGenerator", ...]:
        """Cups creating the ``2n`` points of ``a^t`` (mirror of :meth:`cap_word`)."""
        return tuple(ElementaryGenerator(CUP, g.i, g.m) for g in reversed(self.cap_word()))

    def __str__(self):
        return "{" + ",".join(f"({a},{b})" for a, b in self.pairs) + "}"


@lru_cache(maxsize=None)
def enumerate_matchings(n: int) -> tuple[CrossinglessMatching, ...]:
    """All elements of C_n in canonical (lexicographic pair-list) order."""
    if n < 0:
        raise ValueError("n must be non-negative")

    def gen(points):
        if not points:
            yield ()
            return
        first = points[0]
        for k in range(1, len(points), 2):
            inner, outer = points[1:k], points[k + 1:]
            for mi in gen(inner):
                for mo in gen(outer):
                    yield ((first, points[k]),) + mi + mo

    out = [CrossinglessMatching.from_pairs(p) for p in gen(tuple(range(1, 2 * n + 1)))]
    out.sort(key=lambda c: c.pairs)
    return tuple(out)


def catalan(n: int) -> int:
    c = 1
    for k in range(n):
        c = c * 2 * (2 * k + 1) // (k + 2)
    return c


# --------------------------------------------------------------------------
# generators and words
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ElementaryGenerator:
    kind: str
    i: int
    m: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")

    @property
    def bottom(self) -> int:
        """Number of bottom points."""
        return 2 * self.m - 2 if self.kind == CUP else 2 * self.m

    @property
    def top(self) -> int:
        return 2 * self.m - 2 if self.kind == CAP else 2 * self.m

    @property
    def is_crossing(self) -> bool:
        return self.kind in (SPLUS, SMINUS)

    def check_range(self, position=None):
        if self.m < 0 or (self.kind != ID and self.m < 1):
            raise GeneratorRangeError(position, f"strand parameter m={self.m} out of range")
        if self.kind != ID and not 1 <= self.i <= 2 * self.m - 1:
            raise GeneratorRangeError(
                position, f"index {self.i} out of range 1..{2 * self.m - 1} for m={self.m}")

    def transpose(self) -> "ElementaryGenerator":
        """Mirror image in the horizontal line."""
        return ElementaryGenerator({CUP: CAP, CAP: CUP, SPLUS: SMINUS, SMINUS: SPLUS, ID: ID}[self.kind],
                                   self.i, self.m)

    def __str__(self):
        if self.kind == ID:
            return f"id {self.m}"
        return f"{self.kind} {self.i} @ {self.m}"


def Id(m):
    return ElementaryGenerator(ID, 0, m)


def Cup(i, m):
    return ElementaryGenerator(CUP, i, m)


def Cap(i, m):
    return ElementaryGenerator(CAP, i, m)


def SigmaPlus(i, m):
    return ElementaryGenerator(SPLUS, i, m)


def SigmaMinus(i, m):
    return ElementaryGenerator(SMINUS, i, m)


@dataclass(frozen=True)
class TangleWord:
    """Bottom-to-top sequence of elementary generators.

    ``orient`` holds direction directives ``(level, flags)``: level ``k`` is
    the row of points below generator ``k`` (level ``len(gens)`` is the top
    boundary) and ``flags`` is a string over ``u``/``d`` of matching length.
    """

    gens: tuple[ElementaryGenerator, ...]
    orient: tuple[tuple[int, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gens", tuple(self.gens))
        object.__setattr__(self, "orient", tuple(sorted((int(k), str(f)) for k, f in self.orient)))

    @classmethod
    def of(cls, *gens, orient=()):
        return cls(tuple(gens), tuple(orient))

    @property
    def is_flat(self) -> bool:
        return not any(g.is_crossing for g in self.gens)

    def transpose(self) -> "TangleWord":
        L = len(self.gens)
        return TangleWord(tuple(g.transpose() for g in reversed(self.gens)),
                          tuple((L - k, f) for k, f in self.orient))

    def __len__(self):
        return len(self.gens)


@dataclass(frozen=True)
class WordInfo:
    """Result of :func:`validate_word`."""

    m: int
    n: int
    writhe: int
    cups: int
    signs: tuple[int, ...]          # per generator; 0 for non-crossings
    flags: tuple[str, ...]          # direction of every point, per level
    levels: tuple[int, ...] = field(repr=False, default=())   # points per level

    @property
    def crossings(self) -> int:
        return sum(1 for s in self.signs if s)

    @property
    def negative(self) -> int:
        return sum(1 for s in self.signs if s < 0)


def layer_segments(g: ElementaryGenerator):
    """Segments of one layer, in ordinal order, as pairs of ('b'|'t', pos)."""
    segs = []
    if g.kind == ID:
        segs = [(("b", p), ("t", p)) for p in range(1, 2 * g.m + 1)]
    elif g.kind == CUP:
        for p in range(1, 2 * g.m + 1):
            if p < g.i:
                segs.append((("b", p), ("t", p)))
            elif p == g.i:
                segs.append((("t", p), ("t", p + 1)))
            elif p > g.i + 1:
                segs.append((("b", p - 2), ("t", p)))
    elif g.kind == CAP:
        for p in range(1, 2 * g.m + 1):
            if p < g.i:
                segs.append((("b", p), ("t", p)))
            elif p == g.i:
                segs.append((("b", p), ("b", p + 1)))
            elif p > g.i + 1:
                segs.append((("b", p), ("t", p - 2)))
    else:
        for p in range(1, 2 * g.m + 1):
            if p == g.i:
                segs.append((("b", p), ("t", p + 1)))
            elif p == g.i + 1:
                segs.append((("b", p), ("t", p - 1)))
            else:
                segs.append((("b", p), ("t", p)))
    return segs


def _check_chain(w: TangleWord) -> list[int]:
    """Point counts per level; raises on strand mismatches."""
    if not w.gens:
        raise StrandMismatch(0)
    levels = []
    for k, g in enumerate(w.gens):
        g.check_range(k)
        if levels and levels[-1] != g.bottom:
            raise StrandMismatch(k, levels[-1], g.bottom)
        if not levels:
            levels.append(g.bottom)
        levels.append(g.top)
    return levels


class _ParityUF:
    """Union-find tracking whether two points carry equal or opposite flags."""

    def __init__(self):
        self.parent = {}
        self.par = {}

    def find(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.par[x] = 0
            return x, 0
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        root = x
        acc = 0
        for y in reversed(path):
            acc ^= self.par[y]
            self.par[y] = acc
            self.parent[y] = root
        return root, self.par[path[0]] if path else 0

    def union(self, x, y, parity):
        """Impose flag(x) xor flag(y) == parity; False on conflict."""
        rx, px = self.find(x)
        ry, py = self.find(y)
        if rx == ry:
            return (px ^ py) == parity
        if ry < rx:
            rx, ry, px, py = ry, rx, py, px
        self.parent[ry] = rx
        self.par[ry] = px ^ py ^ parity
        return True


def validate_word(w: TangleWord) -> WordInfo:
    """Check strand chaining, infer orientations and count writhe and cups.

    Components that carry no explicit directive are oriented so that their
    lowest-leftmost point points upward.
    """
    levels = _check_chain(w)
    uf = _ParityUF()
    fixed = {}  # root-independent record of explicit flags
    for k, g in enumerate(w.gens):
        for (sa, pa), (sb, pb) in layer_segments(g):
            x = (k if sa == "b" else k + 1, pa)
            y = (k if sb == "b" else k + 1, pb)
            # a segment joining two points on the same side turns around
            parity = 1 if sa == sb else 0
            if not uf.union(x, y, parity):
                raise OrientationConflict(k)
    for level, flags in w.orient:
        if not 0 <= level <= len(w.gens):
            raise OrientationConflict(min(max(level, 0), len(w.gens)), "orient level out of range")
        if len(flags) != levels[level] or set(flags) - {"u", "d"}:
            raise OrientationConflict(min(level, len(w.gens) - 1),
                                      f"orient expects {levels[level]} flags over u/d, got {flags!r}")
        for p, f in enumerate(flags, start=1):
            x = (level, p)
            uf.find(x)
            bit = 0 if f == "u" else 1
            root, par = uf.find(x)
            want = bit ^ par
            if root in fixed and fixed[root] != want:
                raise OrientationConflict(min(level, len(w.gens) - 1), f"point {p} of level {level}")
            fixed[root] = want
    flags = []
    for level, count in enumerate(levels):
        row = []
        for p in range(1, count + 1):
            root, par = uf.find((level, p))
            row.append("ud"[fixed.get(root, 0) ^ par])
        flags.append("".join(row))
    # roots are the smallest point of each component, so unfixed components
    # point upward at their lowest-leftmost point
    signs = []
    for k, g in enumerate(w.gens):
        if g.is_crossing:
            same = flags[k][g.i - 1] == flags[k][g.i]
            s = 1 if same else -1
            signs.append(s if g.kind == SPLUS else -s)
        else:
            signs.append(0)
    return WordInfo(
        m=levels[0] // 2, n=levels[-1] // 2, writhe=sum(signs),
        cups=sum(1 for g in w.gens if g.kind == CUP), signs=tuple(signs),
        flags=tuple(flags), levels=tuple(levels))


def oriented_like(w: TangleWord, reference: WordInfo | None = None, top=False) -> TangleWord:
    """Copy of ``w`` with its boundary directions pinned explicitly."""
    info = reference or validate_word(w)
    orient = [(0, info.flags[0])] if info.flags[0] else []
    if top and info.flags[-1]:
        orient.append((len(w.gens), info.flags[-1]))
    return TangleWord(w.gens, tuple(orient))


def resolve_flat(w: TangleWord, position: int, resolution: int) -> TangleWord:
    """Replace the crossing at ``position`` by its 0- or 1-resolution.

    For ``SigmaPlus`` the 0-resolution is the identity and the 1-resolution is
    a cap followed by a cup at the same index; ``SigmaMinus`` swaps the two.
    The identity resolution keeps an explicit ``Id`` generator so that
    generator positions downstream are unchanged.
    """
    g = w.gens[position]
    if not g.is_crossing:
        raise NotACrossing(position)
    smooth = resolution if g.kind == SPLUS else 1 - resolution
    if smooth == 0:
        piece = (Id(g.m),)
        orient = w.orient
    else:
        piece = (Cap(g.i, g.m), Cup(g.i, g.m))
        orient = tuple((k if k <= position else k + 1, f) for k, f in w.orient)
    return TangleWord(w.gens[:position] + piece + w.gens[position + 1:], orient)


def resolve_all(w: TangleWord, resolutions: Sequence[int]) -> TangleWord:
    """Resolve every crossing; ``resolutions`` lists choices in word order."""
    out = []
    it = iter(resolutions)
    for g in w.gens:
        if g.is_crossing:
            r = next(it)
            smooth = r if g.kind == SPLUS else 1 - r
            out.extend((Id(g.m),) if smooth == 0 else (Cap(g.i, g.m), Cup(g.i, g.m)))
        else:
            out.append(g)
    return TangleWord(tuple(out))


# --------------------------------------------------------------------------
# strand structure of flat tangles
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FlatTangle:
    """Connectivity of a flat word.

    Endpoints are ``('B', p)`` (bottom) and ``('T', p)`` (top).  Each arc and
    closed loop carries the smallest identifier ``(layer, ordinal)`` of the
    segments it is made of; these identifiers fix the circle order of every
    closure.  ``Id`` generators are dropped: they never hold a minimum.
    """

    m: int
    n: int
    gens: tuple[ElementaryGenerator, ...]
    arcs: tuple[tuple[tuple, tuple, tuple], ...]     # (end, end, key)
    loops: tuple[tuple, ...]                        # keys

    @property
    def length(self) -> int:
        return len(self.gens)


@lru_cache(maxsize=200000)
def flat_tangle(gens: tuple[ElementaryGenerator, ...], m: int | None = None) -> FlatTangle:
    gens = tuple(g for g in gens if g.kind != ID)
    if any(g.is_crossing for g in gens):
        raise ValueError("flat_tangle needs a flat word")
    if not gens:
        if m is None:
            raise ValueError("empty word needs m")
        arcs = tuple((("B", p), ("T", p), None) for p in range(1, 2 * m + 1))
        return FlatTangle(m, m, (), arcs, ())
    levels = _check_chain(TangleWord(gens))
    if m is not None and levels[0] != 2 * m:
        raise StrandMismatch(0, 2 * m, levels[0])
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    seg_key = {}
    L = len(gens)
    for k, g in enumerate(gens):
        for ordinal, ((sa, pa), (sb, pb)) in enumerate(layer_segments(g)):
            x = (k if sa == "b" else k + 1, pa)
            y = (k if sb == "b" else k + 1, pb)
            rx, ry = find(x), find(y)
            key = (k, ordinal)
            if rx != ry:
                parent[ry] = rx
            seg_key[x] = min(seg_key.get(x, key), key)
            seg_key[y] = min(seg_key.get(y, key), key)
    comp_key = {}
    comp_ends = {}
    for x, key in seg_key.items():
        r = find(x)
        comp_key[r] = min(comp_key.get(r, key), key)
    for p in range(1, levels[0] + 1):
        comp_ends.setdefault(find((0, p)), []).append(("B", p))
    for p in range(1, levels[-1] + 1):
        comp_ends.setdefault(find((L, p)), []).append(("T", p))
    arcs = []
    loops = []
    for r, key in comp_key.items():
        ends = comp_ends.get(r)
        if ends is None:
            loops.append(key)
        else:
            assert len(ends) == 2, ends
            arcs.append((ends[0], ends[1], key))
    arcs.sort(key=lambda a: a[2])
    loops.sort()
    return FlatTangle(levels[0] // 2, levels[-1] // 2, gens, tuple(arcs), tuple(loops))


# --------------------------------------------------------------------------
# circle tracing
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ClosedDiagram:
    """Circles of a closed flat diagram, each a sorted tuple of segment ids.

    Segment ids are ``(layer, ordinal)``; the cups of ``a^t`` use layer -1
    and the caps of ``b`` use layer ``len(word)``.
    """

    circles: tuple[tuple[tuple[int, int], ...], ...]

    @property
    def k(self) -> int:
        return len(self.circles)


def trace_circles(a: CrossinglessMatching, w: TangleWord | Sequence[ElementaryGenerator],
                  b: CrossinglessMatching) -> ClosedDiagram:
    """Trace the circles of ``a^t w b``, ordered by smallest segment id."""
    gens = tuple(w.gens if isinstance(w, TangleWord) else w)
    if any(g.is_crossing for g in gens):
        raise ValueError("trace_circles needs a flat word")
    levels = _check_chain(TangleWord(gens)) if gens else [2 * a.n, 2 * a.n]
    if levels[0] != 2 * a.n or levels[-1] != 2 * b.n:
        raise StrandMismatch(0, levels[0], 2 * a.n)
    L = len(gens)
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    segments = []
    for ordinal, (p, q) in enumerate(a.pairs):
        segments.append(((-1, ordinal), (0, p), (0, q)))
    for k, g in enumerate(gens):
        for ordinal, ((sa, pa), (sb, pb)) in enumerate(layer_segments(g)):
            segments.append(((k, ordinal), (k if sa == "b" else k + 1, pa), (k if sb == "b" else k + 1, pb)))
    for ordinal, (p, q) in enumerate(b.pairs):
        segments.append(((L, ordinal), (L, p), (L, q)))
    for _, x, y in segments:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[ry] = rx
    comps = {}
    for sid, x, _ in segments:
        comps.setdefault(find(x), []).append(sid)
    circles = sorted(tuple(sorted(c)) for c in comps.values())
    return ClosedDiagram(tuple(circles))




# --------------------------------------------------------------------------
# Yetter relations
# --------------------------------------------------------------------------

YETTER_RULES = (
    "far_ss", "far_capsigma", "far_cupsigma", "far_capcup",
    "r1", "r1_cap", "r2", "r3",
    "capcup", "capcup_mirror",
    "slide", "slide_t", "slide_cap", "slide_t_cap",
)
FLAT_RULES = ("far_capcup", "capcup", "capcup_mirror")


def yetter_rewrite(w: TangleWord, rule: str, position: int) -> TangleWord:
    """Apply one relation of the tangle category at ``position``.

    Words are read bottom-to-top, so each left-hand side below is the
    reverse of the usual functional notation.

    ``far_ss``          ``s_i ; s_j -> s_j ; s_i`` for ``|i-j| > 1``
    ``far_capsigma``    a cap and a crossing on disjoint strands commute
    ``far_cupsigma``    a cup and a crossing on disjoint strands commute
    ``far_capcup``      a cap and a cup on disjoint strands commute
    ``r1``              ``cup_i ; s_i -> cup_i``; ``r1_cap``: ``s_i ; cap_i -> cap_i``
    ``r2``              ``s_i ; s_i^t -> id``
    ``r3``              ``s_i ; s_j ; s_i -> s_j ; s_i ; s_j`` with ``|i-j| = 1``
    ``capcup``          ``cup_{i+1;m} ; cap_{i;m} -> id_{m-1}``
    ``capcup_mirror``   ``cup_{i;m} ; cap_{i+1;m} -> id_{m-1}``
    ``slide``           ``cup_{i+1} ; s+_i <-> cup_i ; s-_{i+1}``
    ``slide_t``         ``cup_{i+1} ; s-_i <-> cup_i ; s+_{i+1}``
    ``slide_cap``       ``s-_i ; cap_{i+1} <-> s+_{i+1} ; cap_i``
    ``slide_t_cap``     ``s+_i ; cap_{i+1} <-> s-_{i+1} ; cap_i``

    The commutation and slide rules work in either direction.
    """
    if rule not in YETTER_RULES:
        raise PatternMismatch(f"unknown rule {rule!r}")
    size = 3 if rule == "r3" else 2
    if position < 0 or position + size > len(w.gens):
        raise PatternMismatch(f"rule {rule} needs {size} generators at position {position}")
    seg = w.gens[position:position + size]
    if rule in ("r1_cap", "slide_cap", "slide_t_cap"):
        flipped = tuple(g.transpose() for g in reversed(seg))
        base = {"r1_cap": "r1", "slide_cap": "slide", "slide_t_cap": "slide_t"}[rule]
        new = tuple(g.transpose() for g in reversed(_rewrite_local(flipped, base)))
    else:
        new = _rewrite_local(seg, rule)
    out = w.gens[:position] + new + w.gens[position + size:]
    delta = len(new) - size
    orient = tuple((lv if lv <= position else lv + delta, f) for lv, f in w.orient
                   if lv <= position or lv >= position + size)
    return TangleWord(out, orient)


def _rewrite_local(seg, rule):
    if rule == "far_ss":
        g, h = seg
        if g.is_crossing and h.is_crossing and g.m == h.m and abs(g.i - h.i) > 1:
            return (h, g)
    elif rule in ("far_capsigma", "far_cupsigma"):
        new = _commute_with_crossing(*seg, CAP if rule == "far_capsigma" else CUP)
        if new is not None:
            return new
    elif rule == "far_capcup":
        new = _commute_capcup(*seg)
        if new is not None:
            return new
    elif rule == "r1":
        g, h = seg
        if g.kind == CUP and h.is_crossing and h.i == g.i and h.m == g.m:
            return (g,)
    elif rule == "r2":
        g, h = seg
        if g.is_crossing and h.is_crossing and g.i == h.i and g.m == h.m and g.kind != h.kind:
            return (Id(g.m),)
    elif rule == "r3":
        g1, g2, g3 = seg
        if (g1.is_crossing and g1 == g3 and g2.kind == g1.kind and g1.m == g2.m
                and abs(g1.i - g2.i) == 1):
            return (g2, g1, g2)
    elif rule in ("capcup", "capcup_mirror"):
        g, h = seg
        di = 1 if rule == "capcup" else -1
        if g.kind == CUP and h.kind == CAP and g.m == h.m and g.i == h.i + di:
            return (Id(g.m - 1),)
    elif rule in ("slide", "slide_t"):
        g, h = seg
        k1, k2 = (SPLUS, SMINUS) if rule == "slide" else (SMINUS, SPLUS)
        if g.kind == CUP and h.kind == k1 and h.m == g.m and g.i == h.i + 1:
            return (Cup(h.i, g.m), ElementaryGenerator(k2, h.i + 1, g.m))
        if g.kind == CUP and h.kind == k2 and h.m == g.m and h.i == g.i + 1:
            return (Cup(g.i + 1, g.m), ElementaryGenerator(k1, g.i, g.m))
    raise PatternMismatch(f"rule {rule} does not match {', '.join(map(str, seg))}")


def _commute_with_crossing(g, h, kind):
    """Swap a cup or cap with a crossing on disjoint strands."""
    if g.kind == kind and h.is_crossing:
        c, s, c_first = g, h, True
    elif h.kind == kind and g.is_crossing:
        c, s, c_first = h, g, False
    else:
        return None
    # "narrow" is the side with 2m-2 points, where the crossing index may
    # need to be shifted past the missing pair
    narrow = (kind == CAP) == c_first
    if narrow:
        if s.m != c.m - 1:
            return None
        if s.i + 1 < c.i:
            j = s.i
        elif s.i >= c.i:
            j = s.i + 2
        else:
            return None
        s2 = ElementaryGenerator(s.kind, j, c.m)
    else:
        if s.m != c.m:
            return None
        if s.i + 1 < c.i:
            j = s.i
        elif s.i > c.i + 1:
            j = s.i - 2
        else:
            return None
        s2 = ElementaryGenerator(s.kind, j, c.m - 1)
    return (s2, c) if c_first else (c, s2)


def _commute_capcup(g, h):
    """Commute a cap and a cup on disjoint strands, in either vertical order."""
    if g.kind == CAP and h.kind == CUP and g.m == h.m:
        # the cup's new pair sits left (j < i) or right (j > i) of the closed pair
        i, j = g.i, h.i
        if j < i:
            return (Cup(j, g.m + 1), Cap(i + 2, g.m + 1))
        if j > i:
            return (Cup(j + 2, g.m + 1), Cap(i, g.m + 1))
    elif g.kind == CUP and h.kind == CAP and g.m == h.m:
        j, i = g.i, h.i
        if j + 1 < i:
            return (Cap(i - 2, g.m - 1), Cup(j, g.m - 1))
        if i + 1 < j:
            return (Cap(i, g.m - 1), Cup(j - 2, g.m - 1))
    return None
