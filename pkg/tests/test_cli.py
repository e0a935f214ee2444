import json

import pytest

from clusterpoly import duality
from clusterpoly.cli import run
from clusterpoly.exchange import identity

from test_fan import PRINTED_T0, PRINTED_T1, PRINTED_T2

A2 = [[0, 1], [-1, 0]]
A3 = [[0, 1, 0], [-1, 0, 1], [0, -1, 0]]
EXAMPLE = [[0, 2, -4], [-2, 0, 2], [4, -2, 0]]


def ints(obj):
    if isinstance(obj, list):
        return [ints(v) for v in obj]
    return int(obj)


@pytest.fixture
def mat(tmp_path):
    def write(B, name="b.json"):
        path = tmp_path / name
        path.write_text(json.dumps({"n": len(B), "rows": B}))
        return str(path)
    return write


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out else None), (json.loads(err) if err else None)


def test_matrix_mutate(capsys, mat):
    code, out, _ = call(capsys, "matrix-mutate", "--B", mat(A2), "--k", "1")
    assert code == 0 and out["B"]["rows"] == [["0", "-1"], ["1", "0"]]


def test_fan_gsets_example(capsys, mat):
    code, out, _ = call(capsys, "fan-gsets", "--B", mat(EXAMPLE), "--path", "2,3,1", "--lambda", "-1,-1,1")
    assert code == 0
    want = [list(map(list, m)) for m in PRINTED_T2 + PRINTED_T1 + PRINTED_T0]
    assert ints(out["matrices"]) == want
    last = ints(out["levels"][-1]["sets"])
    assert any([1, 0, -1] in [list(c) for c in zip(*m)] for m in last)


def test_verify_dualities(capsys, mat):
    code, out, _ = call(capsys, "verify", "dualities", "--B", mat(A2), "--path", "1,2,1")
    assert code == 0 and out["status"] == "ok"
    assert all(r["status"] == "ok" for r in out["reports"])


@pytest.mark.parametrize("which", ["sign-coherence", "sign-synchronicity", "gbc",
                                   "polytope-routes", "edges-are-cvectors"])
def test_verify_others(capsys, mat, which):
    code, out, _ = call(capsys, "verify", which, "--B", mat(EXAMPLE), "--path", "2,3,1")
    assert code == 0 and out["status"] == "ok"


def test_identity_violation_exits_2(capsys, mat, monkeypatch):
    monkeypatch.setattr(duality, "c_between", lambda *a, **k: identity(2))
    code, out, _ = call(capsys, "verify", "gbc", "--B", mat(A2), "--path", "1")
    assert code == 2
    assert out["witness"]["status"] == "violation" and "GB" in out["witness"]["witness"]


def test_input_errors_exit_1(capsys, mat, tmp_path):
    code, _, err = call(capsys, "matrix-mutate", "--B", mat([[0, 1], [1, 0]]), "--k", "1")
    assert code == 1 and "error" in err
    code, _, err = call(capsys, "matrix-mutate", "--B", mat(A2), "--k", "3")
    assert code == 1 and err["witness"]["path"] == ["3"]
    code, _, err = call(capsys, "no-such-command")
    assert code == 1 and "usage" in err["witness"]
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, _, err = call(capsys, "gvec", "--B", str(bad))
    assert code == 1 and "malformed" in err["message"]
    code, _, _ = call(capsys, "fan-gsets", "--B", mat(EXAMPLE), "--lambda", "1,0,1")
    assert code == 1


def test_big_integers_are_strings(capsys, mat):
    code, out, _ = call(capsys, "matrix-mutate", "--B", mat([[0, 3], [-3, 0]]), "--path", "1,2,1,2,1,2")
    assert code == 0 and all(isinstance(v, str) for r in out["B"]["rows"] for v in r)
    code, out, _ = call(capsys, "fpoly", "--B", mat([[0, 3], [-3, 0]]), "--path", "1,2,1,2")
    assert code == 0
    assert all(isinstance(c, str) for F in out["F"].values() for *_, c in F["terms"])


def test_atomic_out_and_determinism(capsys, mat, tmp_path):
    target = tmp_path / "out.json"
    argv = ["verify", "dualities", "--B", mat(A3), "--samples", "5", "--seed", "7", "--out", str(target)]
    assert run(argv) == 0
    first = target.read_bytes()
    assert run(argv) == 0
    assert target.read_bytes() == first
    assert [p.name for p in tmp_path.iterdir() if p.name.startswith(".tmp-")] == []
    capsys.readouterr()


def test_term_limit(capsys, mat, monkeypatch):
    monkeypatch.setenv("CLUSTER_MAX_TERMS", "3")
    code, _, err = call(capsys, "fpoly", "--B", mat(A3), "--path", "1,2,3,1")
    assert code == 1 and err["error"] == "TermLimitExceeded"


def test_catalog_pipeline(capsys, mat, tmp_path):
    cat = tmp_path / "cat.json"
    assert run(["enumerate", "--B", mat(A2), "--finite", "--out", str(cat)]) == 0
    data = json.loads(cat.read_text())
    assert len(data["seeds"]) == 5 and len(data["g_vectors"]) == 5
    code, out, _ = call(capsys, "compat", "--catalog", str(cat), "--g", "1,0", "--h", "0,1")
    assert code == 0 and out["compatible"] is True
    code, out, _ = call(capsys, "compat", "--catalog", str(cat), "--g", "1,0", "--h", "-1,1")
    assert code == 0 and out["compatible"] is False
    code, out, _ = call(capsys, "degree", "--catalog", str(cat), "--f", "0", "--x", "0")
    assert code == 0 and out["degree"] == "-1"


def test_fan_ng_and_vectors(capsys, mat):
    code, out, _ = call(capsys, "fan-ng", "--B", mat(A2), "--route", "2")
    assert code == 0 and out["complete"] is True and len(out["fan"]["cones"]) == 5
    code, out, _ = call(capsys, "gvec", "--B", mat(A2), "--path", "1", "--index", "1")
    assert code == 0 and out["g"]["1"] == ["-1", "1"]
    code, out, _ = call(capsys, "cvec", "--B", mat(A2), "--path", "1")
    assert code == 0 and ints(out["C"]["rows"]) == [[-1, 1], [0, 1]]
    code, out, _ = call(capsys, "dvec", "--B", mat(A2), "--path", "1,2", "--index", "2")
    assert code == 0 and out["d"]["2"] == ["1", "1"]
    code, out, _ = call(capsys, "polytope-mutate", "--B", mat(A2), "--k", "1")
    assert code == 0 and len(out["results"]) == 2
