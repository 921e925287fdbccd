"""Closed flat diagrams and the maps the TQFT assigns to elementary surfaces.

A flat tangle is handled through its connectivity (:class:`FlatTangle`).
Closing it with matchings ``a`` (below) and ``b`` (above) gives circles,
ordered by the smallest key among their pieces:

* a-arcs have key ``(-1, ord)``, b-arcs ``(L, ord)`` with ``L`` the number
  of non-identity layers,
* arcs and loops of the tangle carry the smallest ``(layer, ordinal)`` of
  their segments; identity strands carry no key.

A cobordism between two closures is compiled into a *program*: a list of
merges, splits, births and deaths on numbered slots, followed by the
permutation placing the surviving slots in the target circle order.
Programs act on labelings encoded as bitmasks (bit ``j`` set means circle
``j`` carries ``X``).  Every structure constant is +1.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .planar import (CrossinglessMatching, ElementaryGenerator, FlatTangle, enumerate_matchings,
                     flat_tangle)

INF = (1 << 30, 0)


def _k(key):
    return INF if key is None else key


def _shift(key, dl):
    return None if key is None else (key[0] + dl, key[1])


def shape(F: FlatTangle):
    """Hashable connectivity data (ignores the generator list)."""
    return (F.m, F.n, F.length, F.arcs, F.loops)


def identity_tangle(m: int) -> FlatTangle:
    return flat_tangle((), m)


def flat_of(gens: Sequence[ElementaryGenerator], m: int) -> FlatTangle:
    return flat_tangle(tuple(g for g in gens if g.kind != "id"), m)


def compose_flat(F: FlatTangle, G: FlatTangle) -> FlatTangle:
    """``F`` below ``G``; keys of ``G`` move up by ``F.length`` layers."""
    if F.n != G.m:
        raise ValueError(f"cannot stack a tangle with {2 * F.n} top points on one with {2 * G.m}")
    L = F.length
    adj: dict = {}
    edges = []
    for e1, e2, key in F.arcs:
        u = e1 if e1[0] == "B" else ("J", e1[1])
        v = e2 if e2[0] == "B" else ("J", e2[1])
        edges.append((u, v, key))
    for e1, e2, key in G.arcs:
        u = e1 if e1[0] == "T" else ("J", e1[1])
        v = e2 if e2[0] == "T" else ("J", e2[1])
        edges.append((u, v, _shift(key, L)))
    for idx, (u, v, _) in enumerate(edges):
        adj.setdefault(u, []).append(idx)
        adj.setdefault(v, []).append(idx)
    seen = [False] * len(edges)
    arcs, loops = [], list(F.loops) + [_shift(k, L) for k in G.loops]

    def walk(start_node, first_edge):
        keys = []
        node, e = start_node, first_edge
        while True:
            seen[e] = True
            keys.append(edges[e][2])
            u, v, _ = edges[e]
            node = v if u == node else u
            if node[0] != "J":
                return node, keys
            nxt = [x for x in adj[node] if x != e]
            if not nxt:
                return node, keys
            e = nxt[0]
            if seen[e]:
                return None, keys

    for node in sorted(n for n in adj if n[0] != "J"):
        for e in adj[node]:
            if not seen[e]:
                end, keys = walk(node, e)
                ks = [k for k in keys if k is not None]
                arcs.append((*sorted((node, end)), min(ks) if ks else None))
    for idx in range(len(edges)):
        if not seen[idx]:
            u = edges[idx][0]
            _, keys = walk(u, idx)
            loops.append(min(k for k in keys if k is not None))
    arcs.sort(key=lambda a: (_k(a[2]), a[0]))
    loops.sort()
    return FlatTangle(F.m, G.n, F.gens + G.gens, tuple(arcs), tuple(loops))


# --------------------------------------------------------------------------
# closures
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Closure:
    """Circles of ``a^t F b``.

    ``edges`` lists ``(u, v, key)``; nodes are the tangle ends ``('B', p)``
    and ``('T', p)`` or ``('L', j)`` for the j-th loop.  ``circle`` gives the
    circle index of each edge, ``keys`` the sorted circle keys.
    """

    edges: tuple
    circle: tuple[int, ...]
    keys: tuple

    @property
    def k(self) -> int:
        return len(self.keys)


@lru_cache(maxsize=None)
def _closure(shp, a: CrossinglessMatching, b: CrossinglessMatching) -> Closure:
    m, n, L, arcs, loops = shp
    if a.n != m or b.n != n:
        raise ValueError("closure matchings do not fit the tangle")
    edges = [(("B", p), ("B", q), (-1, o)) for o, (p, q) in enumerate(a.pairs)]
    edges += [(e1, e2, key) for e1, e2, key in arcs]
    edges += [(("T", p), ("T", q), (L, o)) for o, (p, q) in enumerate(b.pairs)]
    edges += [(("L", j), ("L", j), key) for j, key in enumerate(loops)]
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, _ in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[rv] = ru
    comp_key: dict = {}
    for u, _, key in edges:
        r = find(u)
        comp_key[r] = min(comp_key.get(r, INF), _k(key))
    order = sorted(comp_key, key=lambda r: comp_key[r])
    index = {r: i for i, r in enumerate(order)}
    circle = tuple(index[find(u)] for u, _, _ in edges)
    return Closure(tuple(edges), circle, tuple(comp_key[r] for r in order))


def closure(F: FlatTangle, a: CrossinglessMatching, b: CrossinglessMatching) -> Closure:
    return _closure(shape(F), a, b)


def blocks(F: FlatTangle):
    """``[(a, b, k)]`` over ``C_m x C_n`` in canonical order."""
    return [(a, b, closure(F, a, b).k) for a in enumerate_matchings(F.m) for b in enumerate_matchings(F.n)]


# --------------------------------------------------------------------------
# programs
# --------------------------------------------------------------------------

class Program:
    """Compiled TQFT map between two closed diagrams."""

    __slots__ = ("nsrc", "ops", "out", "saddles", "births", "deaths", "_cache")

    def __init__(self, nsrc, ops, out):
        self.nsrc = nsrc
        self.ops = tuple(ops)
        self.out = tuple(out)          # target circle t <- slot out[t]
        self.saddles = sum(1 for o in ops if o[0] in "ms")
        self.births = sum(1 for o in ops if o[0] == "b")
        self.deaths = sum(1 for o in ops if o[0] == "d")
        self._cache: dict[int, dict[int, int]] = {}

    @property
    def degree(self) -> int:
        """Change of the unshifted quantum degree."""
        return self.saddles - self.births - self.deaths

    def __call__(self, bits: int) -> dict[int, int]:
        hit = self._cache.get(bits)
        if hit is not None:
            return hit
        terms = [{s: (bits >> s) & 1 for s in range(self.nsrc)}]
        for op in self.ops:
            kind = op[0]
            new = []
            if kind == "m":
                _, s1, s2, s = op
                for st in terms:
                    x, y = st.pop(s1), st.pop(s2)
                    if x and y:
                        continue
                    st[s] = x | y
                    new.append(st)
            elif kind == "s":
                _, s, sa, sb = op
                for st in terms:
                    x = st.pop(s)
                    if x:
                        st[sa] = st[sb] = 1
                        new.append(st)
                    else:
                        st2 = dict(st)
                        st[sa], st[sb] = 0, 1
                        st2[sa], st2[sb] = 1, 0
                        new.append(st)
                        new.append(st2)
            elif kind == "b":
                for st in terms:
                    st[op[1]] = 0
                new = terms
            else:  # death
                for st in terms:
                    if st.pop(op[1]):
                        new.append(st)
            terms = new
        out: dict[int, int] = {}
        for st in terms:
            t = 0
            for j, s in enumerate(self.out):
                if st[s]:
                    t |= 1 << j
            out[t] = out.get(t, 0) + 1
        self._cache[bits] = out
        return out


class _Evolver:
    """Edges of a closed diagram under surgery, each edge tagged with a slot."""

    def __init__(self):
        self.edges: dict[int, list] = {}     # eid -> [u, v, tkey, slot]
        self.nslot = 0
        self.ops: list = []
        self._next = 0

    def add(self, u, v, tkey, slot):
        eid = self._next
        self._next += 1
        self.edges[eid] = [u, v, tkey, slot]
        return eid

    def new_slot(self):
        self.nslot += 1
        return self.nslot - 1

    def saddle(self, e1, e2, tk1=None, tk2=None):
        """Replace ``(p1, p2)`` and ``(q1, q2)`` by ``(p1, q1)`` and ``(p2, q2)``."""
        p1, p2, _, s1 = self.edges.pop(e1)
        q1, q2, _, s2 = self.edges.pop(e2)
        if s1 != s2:
            s = self.new_slot()
            for e in self.edges.values():
                if e[3] in (s1, s2):
                    e[3] = s
            self.add(p1, q1, tk1, s)
            self.add(p2, q2, tk2, s)
            self.ops.append(("m", s1, s2, s))
            return
        n1 = self.add(p1, q1, tk1, s1)
        self.add(p2, q2, tk2, s1)
        comp = self._component(n1, s1)
        sa, sb = self.new_slot(), self.new_slot()
        for eid, e in self.edges.items():
            if e[3] == s1:
                e[3] = sa if eid in comp else sb
        self.ops.append(("s", s1, sa, sb))

    def birth(self, node, tkey):
        s = self.new_slot()
        self.add(node, node, tkey, s)
        self.ops.append(("b", s))

    def death(self, eid):
        u, v, _, s = self.edges[eid]
        if any(e[3] == s and k != eid for k, e in self.edges.items()):
            raise ValueError("death needs an isolated circle")
        del self.edges[eid]
        self.ops.append(("d", s))

    def _component(self, start, slot):
        adj: dict = {}
        for eid, (u, v, _, s) in self.edges.items():
            if s == slot:
                adj.setdefault(u, []).append(eid)
                adj.setdefault(v, []).append(eid)
        seen = {start}
        stack = [start]
        while stack:
            e = stack.pop()
            u, v = self.edges[e][0], self.edges[e][1]
            for node in (u, v):
                for f in adj[node]:
                    if f not in seen:
                        seen.add(f)
                        stack.append(f)
        return seen

    def finish(self, nsrc, target: Closure) -> Program:
        slot_key: dict[int, tuple] = {}
        for u, v, tkey, s in self.edges.values():
            slot_key[s] = min(slot_key.get(s, INF), _k(tkey))
        by_key = {k: s for s, k in slot_key.items()}
        if len(by_key) != len(slot_key) or sorted(by_key) != list(target.keys):
            raise AssertionError(f"cobordism does not land on the target closure: "
                                 f"{sorted(slot_key.values())} vs {list(target.keys)}")
        return Program(nsrc, self.ops, [by_key[k] for k in target.keys])


def _load(ev: _Evolver, cl: Closure, tag, slot0, tkey_of):
    """Add the edges of a source closure; returns the edge ids in order."""
    ids = []
    for i, ((u, v, key), c) in enumerate(zip(cl.edges, cl.circle)):
        ids.append(ev.add((tag, u), (tag, v), tkey_of(i, key), slot0 + c))
    return ids


def _order_arcs(b: CrossinglessMatching, order: str):
    span = sorted(range(b.n), key=lambda o: b.pairs[o][1] - b.pairs[o][0])
    if order == "outer":
        span.reverse()
    elif order != "inner":
        raise ValueError("order must be 'outer' or 'inner'")
    return span


@lru_cache(maxsize=None)
def _compose_program(shpF, shpG, a, b, d, order) -> Program:
    F = FlatTangle(shpF[0], shpF[1], (), shpF[3], shpF[4])
    G = FlatTangle(shpG[0], shpG[1], (), shpG[3], shpG[4])
    LF, LG = shpF[2], shpG[2]
    clF, clG = _closure(shpF, a, b), _closure(shpG, b, d)
    ev = _Evolver()
    ev.nslot = clF.k + clG.k

    na, nb = a.n, b.n
    nF = na + len(shpF[3])

    def tkF(i, key):
        # a-arcs, arcs and loops keep their keys; the b-arcs are consumed
        return None if nF <= i < nF + nb else key

    def tkG(i, key):
        # the a-arcs of G's closure are the cups of b^t, consumed by the saddles
        return None if i < nb else _shift(key, LF)

    idsF = _load(ev, clF, "F", 0, tkF)
    idsG = _load(ev, clG, "G", clF.k, tkG)
    bF = idsF[nF:nF + nb]
    bG = idsG[:nb]
    for o in _order_arcs(b, order):
        ev.saddle(bF[o], bG[o])
    target = _closure(shape(compose_flat(_with_len(F, LF), _with_len(G, LG))), a, d)
    return ev.finish(clF.k + clG.k, target)


def _with_len(F: FlatTangle, L: int) -> FlatTangle:
    # FlatTangle.length is len(gens); rebuild a placeholder generator list
    return FlatTangle(F.m, F.n, (None,) * L, F.arcs, F.loops)


def compose_program(F: FlatTangle, G: FlatTangle, a, b, d, order: str = "outer") -> Program:
    """Map ``F(a^t F b) (x) F(b^t G d) -> F(a^t FG d)`` of the minimal cobordism
    ``S_b`` (saddles along the arcs of ``b``, outermost first by default).
    Source labels are the circles of the first closure followed by those of
    the second."""
    return _compose_program(shape(F), shape(G), a, b, d, order)


@lru_cache(maxsize=None)
def _local_program(shpP, shpX, shpX2, shpQ, a, b, moves) -> Program:
    """See :func:`local_program`."""
    P = FlatTangle(shpP[0], shpP[1], (None,) * shpP[2], shpP[3], shpP[4])
    X = FlatTangle(shpX[0], shpX[1], (None,) * shpX[2], shpX[3], shpX[4])
    X2 = FlatTangle(shpX2[0], shpX2[1], (None,) * shpX2[2], shpX2[3], shpX2[4])
    Q = FlatTangle(shpQ[0], shpQ[1], (None,) * shpQ[2], shpQ[3], shpQ[4])
    LP, LX, LX2, LQ = P.length, X.length, X2.length, Q.length
    src_word = compose_flat(compose_flat(P, X), Q)
    tgt_word = compose_flat(compose_flat(P, X2), Q)
    src_cl = _closure(shape(src_word), a, b)
    tgt_cl = _closure(shape(tgt_word), a, b)
    ev = _Evolver()
    # nodes: ('B', p) bottom of P, ('J1', p) top of P, ('J2', p) top of X, ('T', p) top of Q
    pieces = []
    for o, (p, q) in enumerate(a.pairs):
        pieces.append((("B", p), ("B", q), (-1, o), (-1, o), "a"))
    for e1, e2, key in P.arcs:
        pieces.append((_rename(e1, "B", "J1"), _rename(e2, "B", "J1"), key, key, "P"))
    for j, key in enumerate(P.loops):
        pieces.append((("LP", j), ("LP", j), key, key, "P"))
    for e1, e2, key in X.arcs:
        pieces.append((_rename(e1, "J1", "J2"), _rename(e2, "J1", "J2"), _shift(key, LP), None, "X"))
    for j, key in enumerate(X.loops):
        pieces.append((("LX", j), ("LX", j), _shift(key, LP), None, "X"))
    for e1, e2, key in Q.arcs:
        pieces.append((_rename(e1, "J2", "T"), _rename(e2, "J2", "T"),
                       _shift(key, LP + LX), _shift(key, LP + LX2), "Q"))
    for j, key in enumerate(Q.loops):
        pieces.append((("LQ", j), ("LQ", j), _shift(key, LP + LX), _shift(key, LP + LX2), "Q"))
    for o, (p, q) in enumerate(b.pairs):
        pieces.append((("T", p), ("T", q), (LP + LX + LQ, o), (LP + LX2 + LQ, o), "b"))
    # slots follow the canonical circle order of the source closure
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, _, _, _ in pieces:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[rv] = ru
    ckey: dict = {}
    for u, _, sk, _, _ in pieces:
        r = find(u)
        ckey[r] = min(ckey.get(r, INF), _k(sk))
    order = sorted(ckey, key=lambda r: ckey[r])
    if tuple(ckey[r] for r in order) != src_cl.keys:
        raise AssertionError("local decomposition disagrees with the source closure")
    slot_of = {r: i for i, r in enumerate(order)}
    ev.nslot = len(order)
    xids = {}
    for u, v, sk, tk, tag in pieces:
        eid = ev.add(u, v, tk, slot_of[find(u)])
        if tag == "X":
            xids[frozenset((u, v))] = eid
    for mv in moves:
        kind = mv[0]
        if kind == "saddle":
            (u1, v1), (u2, v2) = mv[1], mv[2]
            e1 = xids.pop(frozenset((u1, v1)))
            e2 = xids.pop(frozenset((u2, v2)))
            # orient so that the saddle joins u1-u2 and v1-v2
            if ev.edges[e1][0] != u1:
                ev.edges[e1][0], ev.edges[e1][1] = ev.edges[e1][1], ev.edges[e1][0]
            if ev.edges[e2][0] != u2:
                ev.edges[e2][0], ev.edges[e2][1] = ev.edges[e2][1], ev.edges[e2][0]
            before = set(ev.edges)
            ev.saddle(e1, e2)
            for eid in set(ev.edges) - before:
                u, v = ev.edges[eid][0], ev.edges[eid][1]
                xids[frozenset((u, v))] = eid
        elif kind == "birth":
            node = ("LX2", mv[1])
            before = set(ev.edges)
            ev.birth(node, None)
            (eid,) = set(ev.edges) - before
            xids[frozenset((node,))] = eid
        elif kind == "death":
            ev.death(xids.pop(frozenset((("LX", mv[1]),))))
        else:
            raise ValueError(f"unknown move {kind!r}")
    # remaining X edges take the keys of the X2 arcs with the same ends
    x2_arc = {frozenset((_rename(e1, "J1", "J2"), _rename(e2, "J1", "J2"))): _shift(key, LP)
              for e1, e2, key in X2.arcs}
    x2_loops = [_shift(key, LP) for key in X2.loops]
    loop_nodes = sorted(next(iter(k)) for k in xids if len(k) == 1)
    if len(loop_nodes) != len(x2_loops):
        raise AssertionError("circles of the middle piece do not match the target loops")
    for k, eid in xids.items():
        if len(k) == 1:
            ev.edges[eid][2] = x2_loops[loop_nodes.index(next(iter(k)))]
        else:
            if k not in x2_arc:
                raise AssertionError(f"arc {sorted(k)} has no counterpart in the target piece")
            ev.edges[eid][2] = x2_arc[k]
    # loops of X that survive are matched positionally with the loops of X2
    return ev.finish(len(order), tgt_cl)


def _rename(end, bottom, top):
    side, p = end
    return (bottom, p) if side == "B" else (top, p)


def local_program(P: FlatTangle, X: FlatTangle, X2: FlatTangle, Q: FlatTangle, a, b,
                  moves: tuple) -> Program:
    """Map ``F(a^t P X Q b) -> F(a^t P X2 Q b)`` for a surface that is a
    product outside the middle piece.

    ``moves`` is a tuple of

    * ``('saddle', (u1, v1), (u2, v2))``: arcs of ``X`` given by their ends
      (``('J1', p)`` bottom, ``('J2', p)`` top) are cut and reconnected as
      ``u1-u2`` and ``v1-v2``;
    * ``('birth', j)``: a new circle that becomes loop ``j`` of ``X2``;
    * ``('death', j)``: cap off loop ``j`` of ``X``.
    """
    return _local_program(shape(P), shape(X), shape(X2), shape(Q), a, b, tuple(moves))
