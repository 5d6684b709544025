import io
import json
import subprocess
import sys

import pytest

from walkcent import cli
from walkcent.errors import PrecisionError

K3 = "n=3\n0 1\n0 2\n1 2\n"
P3 = "0 1\n1 2\n"


def call(argv, stdin="", monkeypatch=None, capsys=None):
    monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def run(monkeypatch, capsys):
    return lambda argv, stdin="": call(argv, stdin, monkeypatch, capsys)


def test_cospectral_p3_g6(run):
    code, out, _ = run(["cospectral", "--format", "g6"], "Bg\n")
    assert code == 0
    assert json.loads(out)["classes"] == [[0, 2], [1]]


def test_centrality_k2(run):
    code, out, _ = run(["centrality", "--fn", "subgraph", "--beta", "1", "--prec", "50"], "0 1\n")
    rep = json.loads(out)["report"]
    assert code == 0
    assert all(v["value"].startswith("1.5430806348") and v["digits"] == 50 for v in rep["values"])
    assert rep["classes"] == [[0, 1]]


def test_entropy_k3(run):
    code, out, _ = run(["entropy", "--prec", "30"], K3)
    assert code == 0
    d = json.loads(out)
    assert d["schema"] == "walkcent/1"
    assert d["entropy"] == {"value": "1.09861228866810969139524523692", "digits": 30}
    assert d["maximal"] is True


def test_centrality_csv_golden(run):
    code, out, _ = run(["centrality", "--prec", "30", "--output", "csv"], P3)
    assert code == 0
    assert out == (
        "vertex,value,digits,class\n"
        "0,1.58909177830428543199461103391,30,0\n"
        "1,2.17818355660857086398922206782,30,1\n"
        "2,1.58909177830428543199461103391,30,0\n"
    )


def test_backends_print_identically(run):
    a = json.loads(run(["centrality", "--backend", "taylor", "--beta", "1/2"], P3)[1])
    b = json.loads(run(["centrality", "--backend", "spectral", "--beta", "1/2"], P3)[1])
    assert a["report"]["values"] == b["report"]["values"]


def test_resolvent_exact(run):
    code, out, _ = run(["centrality", "--fn", "resolvent", "--alpha", "1/2"], P3)
    assert code == 0
    assert json.loads(out)["report"]["exact"] == ["3/2", "2", "3/2"]


def test_json_is_deterministic(run):
    first = run(["analyze", "--prec", "30"], P3)[1]
    second = run(["analyze", "--prec", "30"], P3)[1]
    assert first == second
    d = json.loads(first)
    assert d["cospectral_classes"] == [[0, 2], [1]]
    assert d["char_poly"]["coeffs"] == ["1", "0", "-2", "0"]


def test_no_bare_floats(run):
    out = run(["analyze", "--prec", "30", "--format", "g6"], "ECYW\n")[1]

    def walk(x):
        assert not isinstance(x, float)
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        elif isinstance(x, list):
            for v in x:
                walk(v)

    walk(json.loads(out))


def test_cospectral_and_walkreg(run):
    d = json.loads(run(["cospectral", "--pair", "0,2"], P3)[1])
    assert d["cospectral"] is True
    d = json.loads(run(["walkreg", "--format", "g6"], "Bw\n")[1])
    assert d["walk_regular"] is True


def test_solve_beta_pair(run):
    code, out, _ = run(["solve-beta", "--format", "g6", "--pair", "0,4", "--prec", "40"], "ECYW\n")
    assert code == 0
    roots = json.loads(out)["roots"]
    assert len(roots) == 1
    assert roots[0]["beta"]["value"].startswith("1.7788917950309340888926401563")


@pytest.mark.parametrize("argv,stdin", [
    (["centrality", "--fn", "resolvent", "--alpha", "3/4"], P3),
    (["centrality", "--fn", "resolvent"], P3),
    (["centrality", "--beta", "0"], P3),
    (["centrality", "--prec", "20"], P3),
    (["centrality"], "0 1 x\n"),
    (["centrality", "--format", "g6"], "B!\n"),
    (["centrality", "/nonexistent/file"], ""),
    (["walkreg", "--output", "csv"], P3),
    ([], ""),
])
def test_input_errors_exit_2(run, argv, stdin):
    code, _, err = run(argv, stdin)
    assert code == 2
    assert err


def test_precision_exhaustion_exits_3(run, monkeypatch):
    def boom(*a, **k):
        raise PrecisionError("residual stalls")
    monkeypatch.setattr(cli, "regularity_beta_search", boom)
    code, _, err = run(["solve-beta"], P3)
    assert code == 3 and "precision" in err


def test_mine_stream(run, tmp_path):
    summary = tmp_path / "s.json"
    code, out, _ = run(["mine", "--predicate", "walk-regular", "--summary", str(summary)], "Bw\nBg\nA_\n")
    assert code == 0
    lines = [json.loads(l) for l in out.splitlines()]
    assert [l["graph6"] for l in lines] == ["Bw", "A_"]
    s = json.loads(summary.read_text())["summary"]
    assert s["graphs"] == 3 and s["findings"] == {"walk-regular": 2}


def test_mine_summary_is_last_line(run):
    code, out, _ = run(["mine", "--predicate", "walk-regular"], "Bw\nBg\n")
    lines = [json.loads(l) for l in out.splitlines()]
    assert code == 0 and len(lines) == 2
    assert lines[-1]["schema"] == "walkcent/1" and lines[-1]["summary"]["graphs"] == 2


def test_mine_malformed_exit_2(run, caplog):
    code, out, err = run(["mine", "--predicate", "walk-regular"], "Bw\n??x\n")
    assert code == 2
    lines = [json.loads(l) for l in out.splitlines()]
    assert lines[0]["graph6"] == "Bw"
    assert lines[1]["summary"]["malformed"] == 1
    assert "line 2" in caplog.text


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "walkcent", "walkreg", "--format", "g6"],
                         input="Bw\n", capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert json.loads(res.stdout)["walk_regular"] is True
