import io
import json
import subprocess
import sys

import pytest

from birkhoffkit.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_word():
    assert call("word", "RL") == (0, "2,1;1,1\n", "")


def test_section_rl():
    code, out, _ = call("section", "rl")
    assert code == 0
    assert "euler characteristic: -3" in out
    assert "genus: 1" in out
    assert "3 circles over 2 orbits" in out
    assert "first return: 2,1;1,1" in out


def test_section_json():
    code, out, _ = call("--output", "json", "section", "RLRL")
    data = json.loads(out)
    assert (data["euler"], data["genus"]) == (-4, 1)
    assert data["first_return"]["matrix"] == "5,3;3,2"


def test_orbifold():
    code, out, _ = call("orbifold", "--genus", "3", "--orders", "3,3,3,3")
    assert code == 0
    assert "euler characteristic: -19" in out and "boundary circles: 19" in out
    assert "genus: 1" in out


def test_ghys():
    assert call("ghys", "RL", "RRLL")[1] == "bound: 6\n"
    assert call("ghys", "RL", "RRRRRRL", "--max-radius", "2")[1] == "bound: unknown\n"


def test_factor_and_descend():
    assert call("factor", "3,8;4,11")[1] == "word: RRLRRL\nconjugator: 1,0;1,1\n"
    code, out, _ = call("--output", "json", "descend", "3,8;4,11")
    data = json.loads(out)
    assert data["start"] == "RRLRRL" and len(data["steps"]) == 4 and data["ghys_bound"] == 12


def test_conj_and_fixed():
    assert call("conj", "RRL", "RLL")[1].startswith("not conjugate in SL2")
    assert call("conj", "RRL", "RLL", "--gl2")[1].startswith("conjugate in GL2")
    code, out, _ = call("fixed", "3,2;1,1")
    assert out == "0,0\n0,1/2\n"


def test_pants_svg(tmp_path):
    path = tmp_path / "p.svg"
    code, out, _ = call("pants", "RLRL", "--svg", str(path))
    assert code == 0 and "embedding: generic" in out
    assert path.read_text().count("<circle") == 8


def test_graph_and_cache(tmp_path):
    args = ("--cache-dir", str(tmp_path), "graph", "--center", "RL", "--radius", "2",
            "--format", "json")
    first = call(*args)
    second = call(*args)
    assert first == second and first[0] == 0
    assert json.loads(first[1])["center"] == "RL"
    assert (tmp_path / "balls.jsonl").exists()


def test_delta():
    code, out, _ = call("delta", "--center", "RL", "--radius", "1")
    assert code == 0 and out.startswith("delta: 0 ")


def test_audit():
    code, out, _ = call("audit", "RRLL", "--max-period", "3", "--csv")
    assert out.splitlines() == ["m,lhs,interior_sum,residual", "1,4,2,2", "2,32,28,4",
                                "3,196,194,2"]


@pytest.mark.parametrize("argv,token", [
    (["word", "RX"], "INVALID_WORD"),
    (["section", "RRR"], "NOT_MIXED"),
    (["factor", "1,1;0,1"], "NOT_HYPERBOLIC"),
    (["factor", "--", "-3,-2;-1,-1"], "NEGATIVE_TRACE"),
    (["factor", "1,2;3,4"], "INVALID_MATRIX"),
    (["orbifold", "--genus", "0", "--orders", "3"], "UNSUPPORTED_ORBIFOLD"),
    (["audit", "RL", "--max-period", "7"], "CAP_EXCEEDED"),
    (["delta", "--center", "RL", "--radius", "1", "--margin", "2"], "BALL_TOO_SMALL"),
    (["descend", "RL", "--output", "json"], None),
    (["graph", "--center", "RL", "--radius", "9", "--node-budget", "5"], "CAP_EXCEEDED"),
])
def test_domain_errors(argv, token):
    code, out, err = call(*argv)
    if token is None:
        assert code == 0
        return
    assert code == 2 and out == ""
    assert err.count("\n") == 1 and err.startswith(f"error: {token}: ")


@pytest.mark.parametrize("argv", [
    [], ["frob"], ["word"], ["graph", "--radius", "-1", "--center", "RL"],
    ["--trace-cap", "0", "word", "RL"], ["word", "RL", "--bogus"],
    ["orbifold", "--genus", "x", "--orders", "3"], ["fixed", "2,1;1,1", "--power", "0"],
])
def test_usage_errors(argv):
    code, out, err = call(*argv)
    assert code == 1 and out == ""
    assert err.strip().splitlines()[-1].startswith("error: USAGE: ")


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "birkhoffkit", "word", "RL"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "2,1;1,1\n"
