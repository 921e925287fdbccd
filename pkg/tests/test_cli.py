import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from tanghom.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def run():
    runner = CliRunner()

    def go(*args):
        return runner.invoke(main, [str(a) for a in args])
    return go


def test_homology_unknot(run):
    res = run("homology", "cup 1 @ 1 ; cap 1 @ 1")
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert data["poincare"] == "q^(-1) + q"
    assert [(g["j"], g["k"]) for g in data["groups"]] == [(0, -1), (0, 1)]


def test_homology_file_matches_oracle(run):
    a = json.loads(run("homology", "--ring", "Z2", DATA / "trefoil.tng").output)
    b = json.loads(run("homology", "--ring", "Z2", DATA / "trefoil.pd").output)
    assert a["groups"] == b["groups"]


def test_homology_identity_word(run):
    data = json.loads(run("homology", "id 2").output)
    assert sum(g["rank"] for g in data["groups"]) == 12


def test_homology_is_deterministic(run):
    assert run("homology", "trefoil").output == run("homology", "trefoil").output


def test_homology_standard_convention(run):
    data = json.loads(run("homology", "--convention", "standard", "unknot").output)
    assert data["convention"] == "standard"
    assert data["poincare"] == "q^(-1) + q"


def test_homology_output_file(run, tmp_path):
    out = tmp_path / "r.json"
    assert run("homology", "hopf", "-o", out).exit_code == 0
    assert json.loads(out.read_text())["writhe"] == -2


def test_parse_error_exit_1(run):
    res = run("homology", "cup 1 @ 1 ;\n cap 1 @ 1 ; blah")
    assert res.exit_code == 1
    assert "<input>:2:14: error:" in res.output
    assert "^^^^" in res.output


def test_validation_error_exit_1(run):
    res = run("homology", "cup 1 @ 1 ; cap 2 @ 1")
    assert res.exit_code == 1 and "1:13" in res.output


def test_guard_exit_2(run):
    res = run("homology", "knot_7_1", "--max-crossings", "6")
    assert res.exit_code == 2 and "guard" in res.output
    assert run("homology", "knot_7_1", "--ring", "Z2").exit_code == 0


def test_verify_frobenius(run):
    res = run("verify", "frobenius")
    assert res.exit_code == 0 and json.loads(res.output)["ok"]


def test_verify_triangle_site(run):
    res = run("verify", "triangle", "--word", DATA / "trefoil.tng", "--site", 1, "--mode", "derived")
    data = json.loads(res.output)
    assert res.exit_code == 0 and data["ok"]
    assert [c["name"] for c in data["checks"]] == ["word crossing 1 derived: quasi-isomorphic",
                                                    "word crossing 1 derived: exact"]


def test_verify_triangle_literal_fails(run):
    res = run("verify", "triangle", "--word", "hopf", "--mode", "paper")
    assert res.exit_code == 1 and not json.loads(res.output)["ok"]


@pytest.mark.parametrize("site", ["0", "4", "x"])
def test_verify_bad_site(run, site):
    assert run("verify", "triangle", "--word", "trefoil", "--site", site).exit_code == 2


def test_verify_unknown_suite(run):
    assert run("verify", "nope").exit_code == 2


def test_verify_oracle(run):
    assert run("verify", "oracle").exit_code == 0


def test_cobordism_death(run):
    data = json.loads(run("cobordism", DATA / "unknot_death.mov").output)
    assert data["total_degree"] == -1 and data["target"] == ""
    assert data["composite"] == [{"source_q": 1, "target_q": 0, "matrix": [[1]]}]


def test_cobordism_minimal(run):
    data = json.loads(run("cobordism", DATA / "minimal_m2.mov").output)
    assert data["total_degree"] == 0
    assert [m["degree"] for m in data["moves"]] == [0]


def test_cobordism_composite_movie(run):
    data = json.loads(run("cobordism", DATA / "birth_saddle_death.mov").output)
    assert [m["degree"] for m in data["moves"]] == [-1, 1, -1]
    assert data["total_degree"] == -1


def test_cobordism_bad_source(run):
    res = run("cobordism", DATA / "bad_source.mov")
    assert res.exit_code == 1
    assert "bad_source.mov:2:1: error: move 1:" in res.output
