import pytest

from tanghom.verify import SUITES, run_suite

FAST = ["frobenius", "catalan", "arcalg", "khofbraid", "oracle", "cobordism"]


@pytest.mark.parametrize("name", FAST)
def test_suite_passes(name):
    rep = run_suite(name)
    assert rep.checks and rep.ok, [c.name for c in rep.failures()]


def test_tensor_suite_small():
    rep = run_suite("tensor", n_pairs=5, seed=7)
    assert rep.ok and len(rep.checks) == 5
    assert all("seed 7" in c.name for c in rep.checks)


def test_triangle_suite_modes():
    derived = run_suite("triangle", words=("hopf",), modes=("derived",))
    assert derived.ok
    literal = run_suite("triangle", words=("hopf",), modes=("paper",))
    names = {c.name: c.ok for c in literal.checks}
    assert not names["hopf crossing 1 paper: quasi-isomorphic"]
    assert names["hopf crossing 1 paper: exact"]


def test_report_dict():
    d = run_suite("catalan").to_dict()
    assert d["ok"] and d["failed"] == 0 and d["passed"] == 9
    assert set(SUITES) >= {"frobenius", "yetter", "arcalg", "tensor", "khofbraid", "triangle", "oracle"}
