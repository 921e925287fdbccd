"""Property suites over every module, runnable from the CLI.

Each suite returns a :class:`SuiteReport` listing named checks.  Random
suites take a ``seed`` that is echoed in failing checks so they can be
replayed.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable

from . import catalog
from .arcalg import (build_arc_algebra, capcup_closed_form, check_decomposition,
                     crossing_closed_form)
from .errors import TangleError
from .frobenius import verify_axioms
from .khov import (Gluing, collapse, collapsed_ranks, cobordism_map, crossing_complex, kh_flat,
                   skein_triangle, word_homology)
from .oracle import close_word, cube_homology
from .planar import (CAP, CUP, Cap, Cup, ElementaryGenerator, SMINUS, SPLUS, TangleWord, catalan,
                     enumerate_matchings, trace_circles, validate_word, yetter_rewrite, YETTER_RULES)
from .tqft import flat_of
from .zlinalg import homology


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class SuiteReport:
    suite: str
    checks: list[Check] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, name: str, ok: bool, detail: str = ""):
        self.checks.append(Check(name, bool(ok), detail))

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def to_dict(self) -> dict:
        return {"suite": self.suite, "ok": self.ok, "passed": sum(c.ok for c in self.checks),
                "failed": len(self.failures()), "seconds": round(self.seconds, 3),
                "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in self.checks]}


# --------------------------------------------------------------------------
# helpers
# --------------------------------------------------------------------------

def random_flat_word(rng: random.Random, bottom: int, length: int, max_m: int = 3):
    """Random cups and caps starting from ``2 * bottom`` points, never more
    than ``2 * max_m`` points on a level."""
    gens, p = [], bottom
    for _ in range(length):
        opts = []
        if p + 1 <= max_m:
            opts += [Cup(i, p + 1) for i in range(1, 2 * p + 2)]
        if p >= 1:
            opts += [Cap(i, p) for i in range(1, 2 * p)]
        g = rng.choice(opts)
        gens.append(g)
        p = g.top // 2
    return tuple(gens), p


def random_flat_pair(rng: random.Random, max_m: int = 3):
    """``(F, G)`` flat tangles meeting along ``2n`` points, ``1 <= n <= max_m``."""
    while True:
        l = rng.randint(0, max_m)
        gF, n = random_flat_word(rng, l, rng.randint(0, 3), max_m)
        if n < 1:
            continue
        gG, _ = random_flat_word(rng, n, rng.randint(0, 3), max_m)
        return flat_of(gF, l), flat_of(gG, n), (l, gF, n, gG)


def _all_generators(max_m: int):
    out = []
    for m in range(1, max_m + 1):
        for i in range(1, 2 * m):
            out += [Cup(i, m), Cap(i, m), ElementaryGenerator(SPLUS, i, m), ElementaryGenerator(SMINUS, i, m)]
    return out


def _chains(gens, size):
    """Valid words of ``size`` generators drawn from ``gens``."""
    words = [(g,) for g in gens]
    for _ in range(size - 1):
        words = [w + (g,) for w in words for g in gens if g.bottom == w[-1].top]
    return words


def yetter_instances(max_m: int = 2):
    """Every ``(lhs, rule, rhs)`` with the left side built from generators of
    parameter at most ``max_m``."""
    gens = _all_generators(max_m)
    found = []
    for rule in YETTER_RULES:
        size = 3 if rule == "r3" else 2
        for seg in _chains(gens, size):
            w = TangleWord(seg)
            try:
                out = yetter_rewrite(w, rule, 0)
            except TangleError:
                continue
            found.append((w, rule, out))
    return found


def _pin_boundary(lhs: TangleWord, rhs: TangleWord) -> tuple[TangleWord, TangleWord]:
    info = validate_word(lhs)
    bottom, top = info.flags[0], info.flags[-1]

    def pinned(w):
        orient = []
        if bottom:
            orient.append((0, bottom))
        if top:
            orient.append((len(w.gens), top))
        return TangleWord(w.gens, tuple(orient))

    return pinned(lhs), pinned(rhs)


def _poly(d):
    return ", ".join(f"{k}:{v}" for k, v in sorted(d.items()))


# --------------------------------------------------------------------------
# suites
# --------------------------------------------------------------------------

def suite_frobenius() -> SuiteReport:
    rep = SuiteReport("frobenius")
    for name, ok in verify_axioms().items():
        rep.add(name, ok)
    return rep


def suite_catalan(max_n: int = 8) -> SuiteReport:
    rep = SuiteReport("catalan")
    expected = [1, 1, 2, 5, 14, 42, 132, 429, 1430]
    for n in range(max_n + 1):
        got = len(enumerate_matchings(n))
        rep.add(f"|C_{n}|", got == expected[n] == catalan(n), f"{got}")
    return rep


def suite_arcalg(max_m: int = 4, assoc_m: int = 2, order_m: int = 3) -> SuiteReport:
    rep = SuiteReport("arcalg")
    for m in range(max_m + 1):
        A = build_arc_algebra(m)
        bad = [(a, b) for a in A.matchings for b in A.matchings
               if A.block_rank(a, b) != 2 ** trace_circles(a, (), b).k]
        rep.add(f"block ranks m={m}", not bad, f"{len(bad)} mismatches")
    rep.add("rank H^2 = 12", build_arc_algebra(2).rank == 12, str(build_arc_algebra(2).rank))
    for m in range(assoc_m + 1):
        A = build_arc_algebra(m)
        bad = 0
        for i in range(A.rank):
            for j in range(A.rank):
                xy = A.multiply_basis(i, j)
                if not xy:
                    continue
                for k in range(A.rank):
                    lhs = A.multiply(xy, {k: 1})
                    rhs = A.multiply({i: 1}, A.multiply_basis(j, k))
                    bad += lhs != rhs
        rep.add(f"associativity m={m}", bad == 0, f"{bad} failing triples")
        unit = dict(A.unit().coeffs)
        ok = all(A.multiply(unit, {i: 1}) == {i: 1} == A.multiply({i: 1}, unit) for i in range(A.rank))
        rep.add(f"unit m={m}", ok)
        ok = all(A.degree(t) == A.degree(i) + A.degree(j)
                 for (i, j), prod in A.structure_table().items() for t in prod)
        rep.add(f"grading m={m}", ok)
    for m in range(1, max_m + 1):
        for i in range(1, 2 * m):
            cert = check_decomposition(m, i)
            rep.add(f"decomposition m={m} i={i}", cert.holds, f"lhs {_poly(cert.lhs)} rhs {_poly(cert.rhs)}")
    for m in range(order_m + 1):
        A = build_arc_algebra(m)
        same = A.structure_table("Z2", "outer") == A.structure_table("Z2", "inner")
        rep.add(f"saddle order independence over Z2 m={m}", same)
    return rep


def suite_tensor(n_pairs: int = 20, max_m: int = 3, seed: int = 0) -> SuiteReport:
    rep = SuiteReport("tensor")
    rng = random.Random(seed)
    for t in range(n_pairs):
        F, G, desc = random_flat_pair(rng, max_m)
        name = f"pair {t} (seed {seed})"
        try:
            g = Gluing(F, G, check=True)
        except TangleError as exc:
            rep.add(name, False, f"{type(exc).__name__}: {exc}; words {desc}")
            continue
        cok = g.cokernel_report()
        dims = {d: r for d, (r, _) in cok.items() if r}
        torsion = [x for _, tors in cok.values() for x in tors]
        expected = kh_flat(g.FG).graded_dims()
        rep.add(name, dims == expected and not torsion,
                f"middle 2*{F.n}; tensor {_poly(dims)}; Kh(FG) {_poly(expected)}; torsion {torsion}")
    return rep


def suite_khofbraid(max_m: int = 3) -> SuiteReport:
    rep = SuiteReport("khofbraid")
    for m in range(1, max_m + 1):
        for i in range(1, 2 * m):
            got = kh_flat(flat_of((Cap(i, m), Cup(i, m)), m)).graded_dims()
            want = capcup_closed_form(m, i)
            rep.add(f"Kh(cup cap) m={m} i={i}", got == want, f"{_poly(got)} vs {_poly(want)}")
            for kind in (SPLUS, SMINUS):
                r = homology(crossing_complex(kind, i, m).to_chain_complex(), "Z")
                got = collapsed_ranks(r)
                tors = [x for _, t in collapse(r).values() for x in t]
                want = crossing_closed_form(m, i, kind)
                rep.add(f"collapsed Kh({kind}) m={m} i={i}", got == want and not tors,
                        f"{_poly(got)} vs {_poly(want)}")
    return rep


def suite_yetter(max_m: int = 2, ring: str = "Z") -> SuiteReport:
    rep = SuiteReport("yetter")
    for lhs, rule, rhs in yetter_instances(max_m):
        a, b = _pin_boundary(lhs, rhs)
        name = f"{rule}: {' ; '.join(map(str, lhs.gens))}"
        try:
            ha, hb = word_homology(a, ring), word_homology(b, ring)
        except TangleError as exc:
            rep.add(name, False, f"{type(exc).__name__}: {exc}")
            continue
        rep.add(name, ha.groups == hb.groups, f"{ha.poincare_string()} | {hb.poincare_string()}")
    return rep


def suite_reidemeister(ring: str = "Z") -> SuiteReport:
    rep = SuiteReport("reidemeister")
    base = word_homology(catalog.word("unknot"), ring)
    for name in ("unknot_r1_plus", "unknot_r1_minus", "unknot_r2", "unknot_r3_left", "unknot_r3_right"):
        h = word_homology(catalog.word(name), ring)
        rep.add(name, h.groups == base.groups, h.poincare_string())
    return rep


ORACLE_WORDS = ("unknot", "unlink2", "unlink3", "hopf", "hopf_parallel", "trefoil", "figure_eight")


def suite_oracle(words=ORACLE_WORDS, integral=("trefoil",)) -> SuiteReport:
    rep = SuiteReport("oracle")
    for name in words:
        w = catalog.word(name)
        a = word_homology(w, "Z2")
        b = cube_homology(close_word(w), "Z2")
        rep.add(f"{name} over Z2", a.groups == b.groups, f"{a.poincare_string()} | {b.poincare_string()}")
    for name in integral:
        w = catalog.word(name)
        a = word_homology(w, "Z")
        b = cube_homology(close_word(w), "Z")
        rep.add(f"{name} free ranks over Z", a.ranks() == b.ranks())
        rep.add(f"{name} torsion over Z", a.torsion() == b.torsion(), f"{a.torsion()} | {b.torsion()}")
    return rep


TRIANGLE_WORDS = ("trefoil", "hopf", "hopf_parallel")


def suite_triangle(words=TRIANGLE_WORDS, sites=None, modes=("paper", "derived"),
                   ring: str = "Z2", word: TangleWord | None = None) -> SuiteReport:
    """``sites`` are generator positions; ``None`` means every crossing.
    Checks are labelled by the 1-based crossing number along the word."""
    rep = SuiteReport("triangle")
    todo = [(n, catalog.word(n)) for n in words] if word is None else [("word", word)]
    for name, w in todo:
        crossings = [k for k, g in enumerate(w.gens) if g.is_crossing]
        where = sites if sites is not None else crossings
        for site in where:
            tr = skein_triangle(w, site)
            label = f"{name} crossing {crossings.index(site) + 1}"
            for mode in modes:
                r = tr.verify(mode, ring)
                detail = (f"e={tr.e} collapsed degree {r['collapsed_degree']}; "
                          f"cone {r['cone_collapsed']} word {r['word_collapsed']}")
                rep.add(f"{label} {mode}: quasi-isomorphic", r["quasi_isomorphic"], detail)
                rep.add(f"{label} {mode}: exact", r["exact"])
    return rep


def cobordism_instances(n_words: int = 12, seed: int = 0, max_m: int = 2):
    """``(kind, site, word, m)`` for every applicable elementary surface on
    seeded random flat words."""
    rng = random.Random(seed)
    out = []
    for _ in range(n_words):
        m = rng.randint(0, max_m)
        gens, _ = random_flat_word(rng, m, rng.randint(1, 4), max_m)
        lv = [2 * m] + [g.top for g in gens]
        for p in range(len(gens) + 1):
            for i in range(1, lv[p] + 2):
                if lv[p] // 2 + 1 <= max_m + 1:
                    out.append(("birth", (p, i), gens, m))
            for i in range(1, lv[p]):
                out.append(("saddle", (p, i), gens, m))
        for p in range(len(gens) - 1):
            g, h = gens[p], gens[p + 1]
            if g.kind == CUP and h.kind == CAP and g.i == h.i:
                out.append(("death", p, gens, m))
            if g.kind == CAP and h.kind == CUP and g.i == h.i:
                out.append(("saddle", p, gens, m))
    for m in range(1, max_m + 1):
        for b in enumerate_matchings(m):
            out.append(("minimal", 0, b.cap_word() + b.cup_word(), m))
    return out


def suite_cobordism(n_words: int = 12, seed: int = 0) -> SuiteReport:
    rep = SuiteReport("cobordism")
    want = {"birth": -1, "death": -1, "saddle": 1, "minimal": 0}
    counts = {k: 0 for k in want}
    bad = []
    for kind, site, gens, m in cobordism_instances(n_words, seed):
        f = cobordism_map(kind, site, gens, m)
        counts[kind] += 1
        try:
            f.check()
            ok = f.degree == want[kind]
        except TangleError:
            ok = False
        if not ok:
            bad.append((kind, site, gens))
    for kind, n in counts.items():
        fails = [b for b in bad if b[0] == kind]
        rep.add(f"{kind} maps have degree {want[kind]} ({n} instances, seed {seed})", n > 0 and not fails,
                "; ".join(map(str, fails[:3])))
    return rep


SUITES: dict[str, Callable[..., SuiteReport]] = {
    "frobenius": suite_frobenius,
    "catalan": suite_catalan,
    "yetter": suite_yetter,
    "reidemeister": suite_reidemeister,
    "arcalg": suite_arcalg,
    "tensor": suite_tensor,
    "khofbraid": suite_khofbraid,
    "triangle": suite_triangle,
    "oracle": suite_oracle,
    "cobordism": suite_cobordism,
}


def run_suite(name: str, **kwargs) -> SuiteReport:
    t0 = time.perf_counter()
    rep = SUITES[name](**kwargs)
    rep.seconds = time.perf_counter() - t0
    return rep
