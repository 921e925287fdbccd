"""The eleven acceptance criteria, each with its time limit.

Every test records one PASS/FAIL line, printed together at the end of the
run.  ``python3 tests/test_acceptance.py`` runs just this file.
"""
import sys
import time
from contextlib import contextmanager

import pytest

import conftest
from tanghom import catalog
from tanghom.arcalg import build_arc_algebra
from tanghom.khov import skein_triangle, word_homology
from tanghom.oracle import close_word, cube_homology
from tanghom.planar import enumerate_matchings
from tanghom.verify import run_suite


@contextmanager
def criterion(n, title, limit=None):
    t0 = time.perf_counter()
    status, note = "FAIL", ""
    try:
        yield
        elapsed = time.perf_counter() - t0
        if limit is not None and elapsed >= limit:
            note = f" (time limit {limit:g} s exceeded)"
            raise AssertionError(f"criterion {n} took {elapsed:.2f} s, limit {limit:g} s")
        status = "PASS"
    finally:
        elapsed = time.perf_counter() - t0
        lim = f" / {limit:g} s" if limit is not None else ""
        conftest.ACCEPTANCE[n] = f"criterion {n:>2} {status}  {title}  [{elapsed:.2f} s{lim}]{note}"


def _suite_ok(name, **kw):
    rep = run_suite(name, **kw)
    assert rep.checks, f"suite {name} ran no checks"
    assert rep.ok, [f"{c.name}: {c.detail}" for c in rep.failures()]
    return rep


def test_c01_catalan():
    with criterion(1, "Catalan counts n = 0..8", 1.0):
        got = [len(enumerate_matchings(n)) for n in range(9)]
        assert got == [1, 1, 2, 5, 14, 42, 132, 429, 1430]


def test_c02_frobenius():
    with criterion(2, "Frobenius algebra axioms, exhaustive", 1.0):
        rep = _suite_ok("frobenius")
        assert {"associativity", "coassociativity", "frobenius"} <= {c.name for c in rep.checks}
        assert any("counit" in c.name for c in rep.checks)


def test_c03_arc_algebra():
    with criterion(3, "arc algebra ranks, H^2, associativity m<=2, decomposition m<=4", 30.0):
        rep = _suite_ok("arcalg", max_m=4, assoc_m=2, order_m=0)
        names = [c.name for c in rep.checks]
        assert "rank H^2 = 12" in names
        assert sum(n.startswith("decomposition m=4") for n in names) == 7


def test_c04_saddle_orders():
    with criterion(4, "Z/2 structure constants independent of saddle order, m<=3"):
        for m in range(4):
            A = build_arc_algebra(m)
            assert A.structure_table("Z2", "outer") == A.structure_table("Z2", "inner"), m


def test_c05_tensor_flat():
    with criterion(5, "20 seeded flat pairs: tensor over H^m matches Kh(TT'), torsion-free", 120.0):
        rep = _suite_ok("tensor", n_pairs=20, max_m=3, seed=0)
        assert len(rep.checks) == 20


def test_c06_closed_forms():
    with criterion(6, "Kh(cup cap) and collapsed Kh(crossing) closed forms, m<=3"):
        rep = _suite_ok("khofbraid", max_m=3)
        assert len(rep.checks) == 27


def test_c07_invariance():
    with criterion(7, "invariance under Yetter relations (m<=2) and R1/R2/R3 unknots"):
        _suite_ok("yetter", max_m=2, ring="Z")
        _suite_ok("reidemeister", ring="Z")


def test_c08_oracle():
    with criterion(8, "Z/2 homology equals the cube oracle; Z ranks and torsion for the trefoil", 300.0):
        names = ("unknot", "unlink2", "unlink3", "hopf", "hopf_parallel", "trefoil", "figure_eight")
        for name in names:
            w = catalog.word(name)
            assert word_homology(w, "Z2").groups == cube_homology(close_word(w), "Z2").groups, name
        w = catalog.word("trefoil")
        a, b = word_homology(w, "Z"), cube_homology(close_word(w), "Z")
        assert a.ranks() == b.ranks()
        assert a.torsion() == b.torsion() == {(3, -7): (2,)}


def test_c09_exact_triangle():
    """Literal shifts {-2e} and {-1-2e}.  Expected to fail: the saddle has
    quantum degree one while the normalizations only move the collapsed
    degree by even amounts, so the cone is off by one.  The corrected shifts
    are checked in test_triangle_corrected_shifts below."""
    with criterion(9, "skein triangles with the literal shifts, trefoil and Hopf link"):
        failures = []
        for name in ("trefoil", "hopf", "hopf_parallel"):
            w = catalog.word(name)
            sites = [k for k, g in enumerate(w.gens) if g.is_crossing]
            for n, site in enumerate(sites, 1):
                tr = skein_triangle(w, site)
                r = tr.verify("paper", "Z2")
                if not (r["quasi_isomorphic"] and r["exact"]):
                    failures.append(f"{name} crossing {n}: saddle collapsed degree {r['collapsed_degree']}, "
                                    f"cone {r['cone_collapsed']} vs word {r['word_collapsed']}")
        assert not failures, "\n".join(failures)


def test_c10_cobordism_degrees():
    with criterion(10, "birth/death -1, saddle +1, minimal 0 on generated instances"):
        _suite_ok("cobordism", n_words=12, seed=0)


def test_c11_performance():
    with criterion(11, "7-crossing knot: Z/2 < 120 s and Z < 600 s", 720.0):
        w = catalog.word("knot_7_1")
        t0 = time.perf_counter()
        r2 = word_homology(w, "Z2")
        t_z2 = time.perf_counter() - t0
        t0 = time.perf_counter()
        rz = word_homology(w, "Z")
        t_z = time.perf_counter() - t0
        assert t_z2 < 120 and t_z < 600, (t_z2, t_z)
        assert r2.total_rank() == 14
        assert rz.total_rank() == 8 and len(rz.torsion()) == 3


def test_triangle_corrected_shifts():
    """Companion to criterion 9 (not itself a criterion): with the shifts
    derived from the grading bookkeeping every site gives a quasi-isomorphism
    and an exact sequence."""
    for name in ("trefoil", "hopf", "hopf_parallel"):
        w = catalog.word(name)
        for site, g in enumerate(w.gens):
            if g.is_crossing:
                r = skein_triangle(w, site).verify("derived", "Z2")
                assert r["quasi_isomorphic"] and r["exact"], (name, site)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
