from __future__ import annotations

import csv
import json
import math

import pytest

from fockrad.cli import main, read_target_csv
from fockrad.eigenvalues import gamma_closed, rotation_closed
from fockrad.errors import SpecError


def _write(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_gamma_constant(tmp_path):
    spec = _write(tmp_path / "c.json", {"kind": "constant", "value": 1})
    out = tmp_path / "g.csv"
    assert main(["gamma", "--symbol", spec, "--max-n", "3", "--out", str(out)]) == 0
    rows = _rows(out)
    assert list(rows[0]) == ["n", "re", "im", "err"]
    assert [int(r["n"]) for r in rows] == [0, 1, 2, 3]
    for r in rows:
        assert abs(float(r["re"]) - 1) < 1e-12
        assert float(r["im"]) == 0
        assert float(r["err"]) < 1e-10


def test_gamma_rotation(tmp_path):
    spec = _write(tmp_path / "e.json", {"kind": "exp-complex",
                                         "coefficient": {"re": 1 - 1 / math.sqrt(2),
                                                         "im": -1 / math.sqrt(2)}})
    out = tmp_path / "g.csv"
    assert main(["gamma", "--symbol", spec, "--max-n", "3", "--out", str(out)]) == 0
    for r in _rows(out):
        z = complex(float(r["re"]), float(r["im"]))
        assert abs(z - rotation_closed(int(r["n"]))) < 1e-8


def test_gamma_closed_form_cosine(tmp_path):
    spec = _write(tmp_path / "cos.json", {"kind": "cosine"})
    out = tmp_path / "g.csv"
    assert main(["gamma", "--symbol", spec, "--max-n", "5", "--closed-form", "--out", str(out)]) == 0
    rows = _rows(out)
    assert list(rows[0]) == ["n", "re", "im"]
    for r in rows:
        assert float(r["re"]) == gamma_closed("cosine", int(r["n"])).real


def test_gamma_csv_is_deterministic(tmp_path):
    spec = _write(tmp_path / "cos.json", {"kind": "cosine"})
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["gamma", "--symbol", spec, "--max-n", "50", "--out", str(a)])
    main(["gamma", "--symbol", spec, "--max-n", "50", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_gamma_bad_spec_exit_2(tmp_path, capsys):
    spec = _write(tmp_path / "bad.json", {"kind": "indicator", "alpha": 2, "beta": 1})
    assert main(["gamma", "--symbol", spec, "--max-n", "3"]) == 2
    assert "symbol.beta" in capsys.readouterr().err


def test_gamma_accuracy_failure_exit_3(tmp_path, capsys):
    # far beyond what double precision resolves for this symbol
    spec = _write(tmp_path / "e.json", {"kind": "exp-complex",
                                         "coefficient": {"re": 1 - 1 / math.sqrt(2),
                                                         "im": -1 / math.sqrt(2)}})
    assert main(["gamma", "--symbol", spec, "--max-n", "100", "--out", str(tmp_path / "x.csv")]) == 3
    assert "accuracy" in capsys.readouterr().err


def test_gamma_divergent_exit_3(tmp_path):
    spec = _write(tmp_path / "d.json", {"kind": "exp-complex", "coefficient": 1.5})
    assert main(["gamma", "--symbol", spec, "--max-n", "1"]) == 3


def test_verify_stirling(tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", "--suite", "stirling", "--max-n", "100", "--report", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["all_pass"] and rep["results"][0]["suite"] == "stirling"


def test_verify_convoluzation(tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", "--suite", "convoluzation", "--max-n", "1000", "--report", str(out)]) == 0
    row = json.loads(out.read_text())["results"][0]
    assert row["measured"] <= 0.54 and row["pass"]


def test_verify_failure_exit_1(tmp_path, monkeypatch):
    import fockrad.verify as v
    monkeypatch.setattr(v, "CONVOLUZATION_CONSTANT", 0.45)
    out = tmp_path / "r.json"
    assert main(["verify", "--suite", "convoluzation", "--max-n", "50", "--report", str(out)]) == 1
    rep = json.loads(out.read_text())
    assert rep["first_counterexample"]["at"] == 1


def test_approx_alternating_exit_4(capsys):
    assert main(["approx", "--target", "alternating", "--check-to", "1000"]) == 4
    assert "infeasible" in capsys.readouterr().err


def test_approx_aliasing_exit_4():
    assert main(["approx", "--target", "constant", "--check-to", "1000", "--step", "0.5"]) == 4


def test_approx_constant(tmp_path):
    sym, rep = tmp_path / "s.json", tmp_path / "r.json"
    code = main(["approx", "--target", "constant", "--bandwidth", "8", "--check-to", "1000",
                 "--eps", "1e-3", "--out-symbol", str(sym), "--report", str(rep)])
    assert code == 0
    report = json.loads(rep.read_text())
    assert report["total_sup_error_estimate"] <= 1e-3
    assert json.loads(sym.read_text())["kind"] == "sum"


def test_approx_csv_target(tmp_path):
    path = tmp_path / "t.csv"
    lines = ["n,re,im"] + [f"{n},{math.cos(math.sqrt(n))!r},0.0" for n in range(3000)]
    path.write_text("\n".join(lines) + "\n")
    rep = tmp_path / "r.json"
    code = main(["approx", "--target", str(path), "--check-to", "1000", "--eps", "0.1",
                 "--report", str(rep)])
    assert code == 0
    assert json.loads(rep.read_text())["measured_sup_error"] <= 0.1


def test_approx_unknown_target_exit_2():
    assert main(["approx", "--target", "no-such-thing"]) == 2


def test_read_target_csv_validation(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("n,re,im\n0,1,0\n2,1,0\n")
    with pytest.raises(SpecError) as info:
        read_target_csv(path)
    assert info.value.field == "target.row[1].n"
    path.write_text("n,re\n0,1\n")
    with pytest.raises(SpecError):
        read_target_csv(path)
