import json
import subprocess
import sys

import pytest

from ordcal.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err.strip()


@pytest.mark.parametrize("argv,expected", [
    (["hahn", "go", "x + 3*x^(1/2)"], "3*x^(1/2)"),
    (["hahn", "go", "x"], "0"),
    (["hahn", "eval", "x^(-1/2) - 1/3 + x"], "x - 1/3 + x^(-1/2)"),
    (["hahn", "add", "x + 1", "x^(1/2) - 1"], "x + x^(1/2)"),
    (["hahn", "mul", "x + 1", "x - 1"], "x^(2) - 1"),
    (["hahn", "deriv", "x^(1/2)"], "1/2*x^(-1/2)"),
    (["hahn", "pow", "x + 1", "-e", "2"], "x^(2) + 2*x + 1"),
    (["hahn", "compose", "x^(2)", "x + 1"], "x^(2) + 2*x + 1"),
    (["hahn", "invert", "x + 1"], "x - 1"),
    (["hahn", "iterate", "x + 1", "-e", "1/2"], "x + 1/2"),
    (["hahn", "invert", "x + x^(1/2)", "--floor", "-1"], "x - x^(1/2) + 1/2 - 1/8*x^(-1/2)"),
    (["free", "op", "--order", "0,1", "--cap", "2"], "1 + X0 + X1 + X0.X1"),
    (["free", "check-lemma47", "--vars", "2", "--cap", "3"], "membership: true"),
    (["order", "tree", "--signs", "1,-1"], "linearization: 0 2 1"),
    (["order", "tree", "--signs", "1,-1", "--segments", "1,3"], "linearization: 0 2 1\nL: {0}\nR: {}"),
])
def test_text_output(capsys, argv, expected):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out == expected


def test_lemma51_verdict(capsys):
    code, out, _ = run(capsys, "free", "check-lemma51", "--vars", "1", "--cap", "4")
    assert code == 0
    assert out.splitlines()[0] == "membership: true"
    assert out.splitlines()[1].startswith("ideal dimension: ")


def test_negative_values_accepted(capsys):
    code, out, _ = run(capsys, "order", "tree", "--signs", "-1,1,-1", "--segments", "2,4", "--json")
    assert code == 0
    assert json.loads(out) == {"length": 4, "signs": [-1, 1, -1], "linearization": [1, 3, 2, 0],
                               "L": [1], "R": [0]}


def test_json_series(capsys):
    code, out, _ = run(capsys, "--json", "hahn", "eval", "x + 3*x^(1/2)", "--floor", "-5")
    assert code == 0
    assert out == '{"terms": [{"exp": "1", "coef": "1"}, {"exp": "1/2", "coef": "3"}], "floor": "-5"}'


@pytest.mark.parametrize("argv,code", [
    (["hahn", "eval", "x + + 1"], 2),
    (["hahn", "pow", "2*x", "-e", "1/2", "--floor", "-2"], 2),
    (["hahn", "pow", "x"], 2),
    (["hahn", "invert", "2*x"], 2),
    (["hahn", "add", "x"], 2),
    (["hahn", "go", "x", "--floor", "-2"], 3),
    (["order", "tree", "--signs", "1,2"], 2),
    (["order", "tree", "--signs", "1", "--segments", "2,1"], 2),
    (["recompose", "/nonexistent/file.json"], 2),
])
def test_exit_codes(capsys, argv, code):
    got, _, err = run(capsys, *argv)
    assert got == code
    assert err.startswith("error:")


def test_syntax_error_reports_offset(capsys):
    _, _, err = run(capsys, "hahn", "eval", "x + + 1")
    assert "offset 4" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["hahn", "frobnicate", "x"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["hahn", "eval", "x", "--floor", "abc"])
    assert info.value.code == 2


def test_decompose_and_recompose(capsys, tmp_path):
    expr = "x + x^(1/2) + x^(1/4)"
    code, out, _ = run(capsys, "decompose", "--scale", "s1", "--signs", "alt", "--floor", "-1", expr, "--json")
    assert code == 0
    obj = json.loads(out)
    assert obj["scale"] == "S1" and obj["floor"] == "-1"
    assert obj["steps"][0] == {"e": "1/2", "c": "1"}
    path = tmp_path / "d.json"
    path.write_text(out)
    code, back, _ = run(capsys, "recompose", str(path))
    assert code == 0
    assert back == expr


def test_decompose_text(capsys):
    code, out, _ = run(capsys, "decompose", "--signs", "-1", "--floor", "-3", "x + 3*x^(1/2)")
    assert code == 0
    assert out.splitlines() == ["scale: S0", "floor: -3", "length: 1", "0: 3*x^(1/2)"]


@pytest.mark.parametrize("kind", ["mg", "growth", "roundtrip", "chain"])
def test_verify(capsys, kind):
    code, out, _ = run(capsys, "verify", kind, "--iters", "4", "--json")
    assert code == 0
    report = json.loads(out)
    assert report and all(r["status"] == "pass" for r in report)
    assert all(list(r) == ["axiom", "status", "instances", "witness"] for r in report)


def test_verify_failure_exit_code(capsys, monkeypatch):
    import ordcal.products as products

    monkeypatch.setitem(products.AXIOMS, "MG3", lambda rng, n, alphabet, cap: (False, {"n": n}))
    code, out, _ = run(capsys, "verify", "mg", "--iters", "2")
    assert code == 1
    assert "MG3: fail" in out


def test_iteration_cap_env(capsys, monkeypatch):
    monkeypatch.setenv("ORDCAL_ITER_CAP", "1")
    with pytest.raises(RuntimeError):
        main(["decompose", "--floor", "-1", "x + x^(1/2) + x^(1/4)"])


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "ordcal", "hahn", "go", "x + 3*x^(1/2)"],
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "3*x^(1/2)"
