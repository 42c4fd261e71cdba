import io
import json
import subprocess
import sys

import pytest

from folner.cli import main
from folner.lattice import rectangle_optimal


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_optimize_b2():
    code, out, _ = call("optimize", "--subset", "ball:2")
    doc = json.loads(out)
    assert code == 0 and doc["N"] == "3/4" and doc["schema"] == "folner-result/1"
    assert len(doc["S0"]) == 9


def test_optimize_single_vertex(tmp_path):
    p = tmp_path / "s.txt"
    p.write_text("0,0\n")
    code, out, _ = call("optimize", "--subset", str(p), "--engine", "flow")
    assert code == 0 and json.loads(out)["N"] == "1/4"


def test_optimize_both_with_trace_and_dot(tmp_path):
    dot = tmp_path / "c.dot"
    code, out, _ = call("optimize", "--subset", "box:2x3", "--engine", "both", "--trace", "--dot", str(dot), "--approx")
    doc = json.loads(out)
    assert code == 0 and doc["N"] == "3/5" and doc["flow"]["N"] == "3/5"
    assert doc["S0_agree"] and doc["trace"] and abs(doc["N_approx"] - 0.6) < 1e-12
    assert dot.read_text().startswith("digraph")


def test_engine_disagreement_exit_code(monkeypatch):
    from fractions import Fraction

    import folner.engines as eng

    real = eng.compute_N

    def skewed(ctx, h0=None):
        r = real(ctx, h0)
        r.N += Fraction(1, 7)
        return r

    monkeypatch.setattr(eng, "compute_N", skewed)
    code, out, _ = call("optimize", "--subset", "ball:1", "--engine", "both")
    doc = json.loads(out)
    assert code == 3 and doc["simplex"]["N"] == "5/12" and doc["flow"]["N"] != "5/12"


def test_non_admitting_subset(tmp_path):
    g = tmp_path / "g.txt"
    g.write_text("a b\nb c\nc a\n")
    s = tmp_path / "s.txt"
    s.write_text("a\nb\nc\n")
    code, _, err = call("optimize", "--graph", str(g), "--subset", str(s))
    assert code == 2 and "no boundary edges" in err and '"a"' in err


def _write_result(tmp_path, **kw):
    code, out, _ = call("optimize", "--subset", "ball:2")
    p = tmp_path / "r.json"
    p.write_text(out)
    return p, json.loads(out)


def test_verify_pass_and_norm(tmp_path):
    p, _ = _write_result(tmp_path)
    code, out, _ = call("verify", "--subset", "ball:2", "--cooling", str(p), "--norm", "3/4")
    rep = json.loads(out)
    assert code == 0 and rep["ok"] and rep["norm"] == "3/4"
    code, out, _ = call("verify", "--subset", "ball:2", "--cooling", str(p), "--norm", "1/2")
    assert code == 2 and not json.loads(out)["norm_ok"]


def test_verify_zero_function_fails_everywhere(tmp_path):
    p, doc = _write_result(tmp_path)
    for rec in doc["cooling"]:
        rec["value"] = "0/1"
    p.write_text(json.dumps(doc))
    code, out, _ = call("verify", "--subset", "ball:2", "--cooling", str(p))
    rep = json.loads(out)
    assert code == 2 and len(rep["failed_vertices"]) == 13


def test_verify_names_a_tampered_edge(tmp_path):
    p, doc = _write_result(tmp_path)
    doc["cooling"][5]["value"] = "7/4"
    p.write_text(json.dumps(doc))
    code, out, _ = call("verify", "--subset", "ball:2", "--cooling", str(p), "--norm", "3/4")
    rep = json.loads(out)
    assert code == 2 and rep["failed_edges"] == [doc["cooling"][5]["oriented"]]


def test_verify_malformed(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert call("verify", "--subset", "ball:1", "--cooling", str(p))[0] == 2
    p.write_text(json.dumps([{"oriented": [[0, 0], [1, 0]], "value": "1/2"}]))
    assert call("verify", "--subset", "ball:1", "--cooling", str(p))[0] == 2


@pytest.mark.parametrize("m,n", [(1, 1), (3, 5), (12, 12)])
def test_verify_rectangle_optimum(tmp_path, m, n):
    p = tmp_path / "c.json"
    p.write_text(json.dumps(rectangle_optimal(m, n).to_json()))
    code, _, _ = call("verify", "--subset", f"box:{m}x{n}", "--cooling", str(p), "--norm", f"{m * n}/{2 * (m + n)}")
    assert code == 0


def test_brute():
    code, out, _ = call("brute", "--subset", "ball:1")
    doc = json.loads(out)
    assert code == 0 and doc["N"] == "5/12" and "union" in doc
    assert call("brute", "--subset", "ball:4")[0] == 4


def test_lattice_table():
    code, out, _ = call("lattice", "--n-min", "2", "--n-max", "2")
    lines = out.strip().splitlines()
    assert lines[0] == "n,k,size,boundary,FR,k0"
    assert lines[2] == "2,1,9,12,3/4,*"
    code, out, _ = call("lattice", "--n-max", "3", "--format", "json", "--approx")
    recs = json.loads(out)
    assert [r["k"] for r in recs if r["k0"]] == [0, 0, 1, 1]
    assert all("/" in r["FR"] for r in recs)


def test_peelcheck(tmp_path):
    P = tmp_path / "p.txt"
    P.write_text("2,0\n-2,0\n0,2\n0,-2\n")
    code, out, _ = call("peelcheck", "--subset", "ball:2", "--peel", str(P))
    assert code == 0 and json.loads(out)["peeling"] is True
    P.write_text("# nothing\n")
    code, _, err = call("peelcheck", "--subset", "ball:2", "--peel", str(P))
    assert code == 2 and "usage" in err


def test_h0_constant_and_file(tmp_path):
    code, out, _ = call("optimize", "--subset", "ball:1", "--engine", "flow", "--h0", "2/1")
    assert json.loads(out)["N"] == "5/6"
    h = tmp_path / "h.txt"
    h.write_text("0,0 3/1\n1,0 1/1\n-1,0 1/1\n0,1 1/1\n0,-1 1/1\n")
    code, out, _ = call("optimize", "--subset", "ball:1", "--engine", "flow", "--h0", str(h))
    assert code == 0 and json.loads(out)["N"] == "3/4"  # the hot center alone
    assert call("optimize", "--subset", "ball:1", "--h0", "2/1")[0] == 2  # simplex needs unit heat


def test_outputs_are_byte_identical():
    a = call("optimize", "--subset", "ball:3", "--engine", "both", "--trace")[1]
    b = call("optimize", "--subset", "ball:3", "--engine", "both", "--trace")[1]
    assert a == b


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "folner.cli", "optimize", "--subset", "ball:0"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["N"] == "1/4"
