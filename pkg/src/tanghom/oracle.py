"""Cube-of-resolutions Khovanov homology of closed diagrams.

This is a second, separate computation used to cross-check :mod:`khov`.  It
shares only the Frobenius algebra and the linear algebra; diagrams are read
into PD notation here and the cube is built directly from it.

PD conventions: ``X[a, b, c, d]`` lists the four edges counterclockwise,
starting with the incoming under-strand.  The 0-smoothing joins ``a-b`` and
``c-d``, the 1-smoothing ``a-d`` and ``b-c``.  The crossing is positive when
the over-strand runs from ``d`` to ``b``.

Internally the grading is Bar-Natan's (``deg v+ = 1``, height shift
``{r}``, normalization ``[-n_-]{n_+ - 2 n_-}``).  Reports are returned in
the grading used by :mod:`khov`, whose quantum degree is the negative of
this one; pass ``convention="standard"`` to keep Bar-Natan's.
"""
from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass

from .errors import TangleError, TooManyCrossings
from .frobenius import comult, mult
from .planar import SPLUS, TangleWord, validate_word
from .zlinalg import ChainComplex, HomologyReport, IntMatrix, homology

DEFAULT_LIMIT = 12


@dataclass(frozen=True)
class LinkDiagram:
    """PD code plus explicit crossing signs and crossingless components."""

    crossings: tuple[tuple[int, int, int, int], ...]
    signs: tuple[int, ...]
    free_loops: int = 0

    def __post_init__(self):
        count = defaultdict(int)
        for x in self.crossings:
            for e in x:
                count[e] += 1
        bad = [e for e, c in count.items() if c != 2]
        if bad:
            raise TangleError(f"edges {sorted(bad)} do not appear exactly twice")
        if len(self.signs) != len(self.crossings) or any(s not in (1, -1) for s in self.signs):
            raise TangleError("one sign of +1 or -1 per crossing is required")

    @property
    def edge_count(self) -> int:
        return len({e for x in self.crossings for e in x})

    @property
    def n_plus(self) -> int:
        return sum(1 for s in self.signs if s > 0)

    @property
    def n_minus(self) -> int:
        return sum(1 for s in self.signs if s < 0)

    def components(self) -> int:
        parent = {}

        def find(x):
            while parent.setdefault(x, x) != x:
                x = parent[x]
            return x
        for a, b, c, d in self.crossings:
            for u, v in ((a, c), (b, d)):
                parent[find(u)] = find(v)
        return len({find(e) for x in self.crossings for e in x}) + self.free_loops

    def to_text(self) -> str:
        lines = [f"X[{a},{b},{c},{d}]" for a, b, c, d in self.crossings]
        lines += ["loop"] * self.free_loops
        return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# reading words and PD text
# --------------------------------------------------------------------------

_CORNERS = {"SW": (-1, -1), "SE": (1, -1), "NE": (1, 1), "NW": (-1, 1)}
_CCW = ("SW", "SE", "NE", "NW")


def close_word(w: TangleWord) -> LinkDiagram:
    """PD code of a word with empty boundary."""
    info = validate_word(w)
    if info.m or info.n:
        raise TangleError("close_word needs a word with empty boundary")
    flags = info.flags
    # graph: point nodes ('p', level, pos) and crossing corners
    adj: dict = defaultdict(list)
    crossing_at = []

    def link(u, v):
        adj[u].append(v)
        adj[v].append(u)

    for k, g in enumerate(w.gens):
        lo, hi = g.bottom, g.top
        if g.kind == "id":
            for p in range(1, lo + 1):
                link(("p", k, p), ("p", k + 1, p))
        elif g.kind == "cup":
            for p in range(1, hi + 1):
                if p < g.i:
                    link(("p", k, p), ("p", k + 1, p))
                elif p > g.i + 1:
                    link(("p", k, p - 2), ("p", k + 1, p))
            link(("p", k + 1, g.i), ("p", k + 1, g.i + 1))
        elif g.kind == "cap":
            for p in range(1, lo + 1):
                if p < g.i:
                    link(("p", k, p), ("p", k + 1, p))
                elif p > g.i + 1:
                    link(("p", k, p), ("p", k + 1, p - 2))
            link(("p", k, g.i), ("p", k, g.i + 1))
        else:
            for p in range(1, lo + 1):
                if p not in (g.i, g.i + 1):
                    link(("p", k, p), ("p", k + 1, p))
            corner = {"SW": ("p", k, g.i), "SE": ("p", k, g.i + 1),
                      "NW": ("p", k + 1, g.i), "NE": ("p", k + 1, g.i + 1)}
            for name, node in corner.items():
                link(("x", k, name), node)
            crossing_at.append((k, g, corner))
    # edges of the diagram: maximal paths between crossing corners
    edge_of: dict = {}
    next_id = 1
    seen = set()
    for k, g, corner in crossing_at:
        for name in _CCW:
            start = ("x", k, name)
            if start in edge_of:
                continue
            prev, node = start, adj[start][0]
            while node[0] == "p":
                seen.add(node)
                nxt = [v for v in adj[node] if v != prev]
                prev, node = node, nxt[0]
            edge_of[start] = edge_of[node] = next_id
            next_id += 1
    points = {u for u in adj if u[0] == "p"}
    free = 0
    rest = points - seen
    while rest:
        start = rest.pop()
        stack = [start]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v in rest:
                    rest.discard(v)
                    stack.append(v)
        free += 1
    crossings, signs = [], []
    for k, g, corner in crossing_at:
        # strand A runs SW-NE, strand B runs SE-NW; A is over for s+
        over_pair, under_pair = (("SW", "NE"), ("SE", "NW")) if g.kind == SPLUS else \
            (("SE", "NW"), ("SW", "NE"))

        def direction(pair):
            # 'u' at a bottom corner means the strand enters there
            c0, c1 = pair
            lvl, pos = corner[c0][1], corner[c0][2]
            up = flags[lvl][pos - 1] == "u"
            return (c0, c1) if up else (c1, c0)
        u_in, u_out = direction(under_pair)
        o_in, o_out = direction(over_pair)
        start = _CCW.index(u_in)
        order = [_CCW[(start + j) % 4] for j in range(4)]
        crossings.append(tuple(edge_of[("x", k, name)] for name in order))
        uv = _sub(_CORNERS[u_out], _CORNERS[u_in])
        ov = _sub(_CORNERS[o_out], _CORNERS[o_in])
        signs.append(1 if ov[0] * uv[1] - ov[1] * uv[0] > 0 else -1)
    return LinkDiagram(tuple(crossings), tuple(signs), free)


def _sub(p, q):
    return (p[0] - q[0], p[1] - q[1])


_PD_RE = re.compile(r"X\s*\[\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\]")


def parse_pd(text: str) -> LinkDiagram:
    """One crossing per line as ``X[a,b,c,d]`` or ``a b c d``; ``loop`` adds a
    crossingless component; ``#`` starts a comment.  Edges must be numbered
    consecutively along the orientation of each component."""
    crossings, free = [], 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower() in ("loop", "o"):
            free += 1
            continue
        found = _PD_RE.findall(line)
        if found:
            crossings.extend(tuple(map(int, f)) for f in found)
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 4 or not all(re.fullmatch(r"-?\d+", p) for p in parts):
            raise TangleError(f"line {lineno}: expected a crossing X[a,b,c,d], got {raw!r}")
        crossings.append(tuple(int(p) for p in parts))
    return LinkDiagram(tuple(crossings), tuple(_pd_sign(x, crossings) for x in crossings), free)


def _pd_sign(x, crossings) -> int:
    """Sign from the numbering: positive when the over-strand runs ``d -> b``."""
    _, b, _, d = x
    succ = _successors(crossings)
    if succ.get(d) == b:
        return 1
    if succ.get(b) == d:
        return -1
    raise TangleError(f"cannot orient the over-strand of {x}")


def _successors(crossings):
    # the under-strand a -> c fixes successors; over-strand edges are
    # consecutive up to the wrap within their component
    comp_edges = defaultdict(set)
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            x = parent[x]
        return x
    for a, b, c, d in crossings:
        parent[find(a)] = find(c)
        parent[find(b)] = find(d)
    for x in crossings:
        for e in x:
            comp_edges[find(e)].add(e)
    succ = {}
    for edges in comp_edges.values():
        es = sorted(edges)
        for i, e in enumerate(es):
            succ[e] = es[(i + 1) % len(es)]
    return succ


# --------------------------------------------------------------------------
# the cube
# --------------------------------------------------------------------------

def _circles(d: LinkDiagram, state: int):
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x
    for c, (a, b, cc, dd) in enumerate(d.crossings):
        pairs = ((a, b), (cc, dd)) if not (state >> c) & 1 else ((a, dd), (b, cc))
        for u, v in pairs:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[rv] = ru
    roots = sorted({find(e) for x in d.crossings for e in x}, key=lambda r: min(
        e for x in d.crossings for e in x if find(e) == r))
    index = {r: i for i, r in enumerate(roots)}
    circle_of = {e: index[find(e)] for x in d.crossings for e in x}
    return len(roots) + d.free_loops, circle_of


def _edge_sign(state: int, c: int, scheme: str) -> int:
    if scheme == "before":
        ones = bin(state & ((1 << c) - 1)).count("1")
    elif scheme == "after":
        ones = bin(state >> (c + 1)).count("1")
    else:
        raise ValueError("sign scheme must be 'before' or 'after'")
    return -1 if ones % 2 else 1


def cube_complex(d: LinkDiagram, scheme: str = "before", limit: int | None = DEFAULT_LIMIT) -> ChainComplex:
    """Normalized Khovanov complex in Bar-Natan's grading."""
    n = len(d.crossings)
    if limit is not None and n > limit:
        raise TooManyCrossings(n, limit)
    info = {s: _circles(d, s) for s in range(1 << n)}
    base: dict[int, dict[int, int]] = defaultdict(dict)     # height -> state -> offset
    qdeg: dict[int, list[int]] = defaultdict(list)
    nm, np_ = d.n_minus, d.n_plus
    for s in range(1 << n):
        r = bin(s).count("1")
        k, _ = info[s]
        base[r][s] = len(qdeg[r - nm])
        for bits in range(1 << k):
            ones = bin(bits).count("1")
            qdeg[r - nm].append((k - ones) - ones + r + np_ - 2 * nm)
    entries: dict[int, list] = defaultdict(list)
    for s in range(1 << n):
        r = bin(s).count("1")
        k, circ = info[s]
        for c in range(n):
            if (s >> c) & 1:
                continue
            t = s | (1 << c)
            kt, circt = info[t]
            sign = _edge_sign(s, c, scheme)
            a, b, cc, dd = d.crossings[c]
            src_off, tgt_off = base[r][s], base[r + 1][t]
            # circles touching the crossing before and after
            before = sorted({circ[a], circ[cc]})
            after = sorted({circt[a], circt[cc]})
            # every other circle keeps its identity: map by an edge it contains
            keep = {}
            for e, ci in circ.items():
                if ci not in before:
                    keep[ci] = circt[e]
            for j in range(d.free_loops):
                keep[k - d.free_loops + j] = kt - d.free_loops + j
            for bits in range(1 << k):
                rest = 0
                for ci, ct in keep.items():
                    if (bits >> ci) & 1:
                        rest |= 1 << ct
                if len(before) == 2:          # merge
                    x, y = (bits >> before[0]) & 1, (bits >> before[1]) & 1
                    for z, v in mult(x, y).items():
                        tb = rest | (z << after[0])
                        entries[r - nm].append((tgt_off + tb, src_off + bits, sign * v))
                else:                          # split
                    x = (bits >> before[0]) & 1
                    for (z1, z2), v in comult(x).items():
                        tb = rest | (z1 << after[0]) | (z2 << after[1])
                        entries[r - nm].append((tgt_off + tb, src_off + bits, sign * v))
    dmat = {h: IntMatrix.from_entries(len(qdeg.get(h + 1, [])), len(qdeg[h]), ents)
            for h, ents in entries.items()}
    return ChainComplex(dict(qdeg), dmat)


def cube_homology(d: LinkDiagram, ring: str = "Z", scheme: str = "before",
                  convention: str = "paper", limit: int | None = DEFAULT_LIMIT) -> HomologyReport:
    """Khovanov homology from the cube of resolutions.

    ``convention="paper"`` reports ``(j, -q)`` to match :mod:`khov`;
    ``"standard"`` keeps Bar-Natan's ``(j, q)``.
    """
    C = cube_complex(d, scheme, limit)
    r = homology(C, ring)
    if convention == "paper":
        r = HomologyReport({(j, -q): g for (j, q), g in r.groups.items()}, ring)
    elif convention != "standard":
        raise ValueError("convention must be 'paper' or 'standard'")
    r.meta.update(writhe=d.n_plus - d.n_minus, crossings=len(d.crossings), convention=convention)
    return r


def graded_euler(d: LinkDiagram, scheme: str = "before") -> dict[int, int]:
    """Graded Euler characteristic read off the chain groups."""
    C = cube_complex(d, scheme)
    out: dict[int, int] = defaultdict(int)
    for j, ks in C.qdeg.items():
        for k in ks:
            out[k] += -1 if j % 2 else 1
    return {k: v for k, v in out.items() if v}
