import csv
import io
import json

import pytest

from gstruct.cli import build_report, dumps, main
from gstruct.models import build_flag

TOP_KEYS = {"model", "params", "conventions", "scalars", "torsion", "classes", "checks"}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "argv",
    [
        ("report", "flag", "--t", "0.5"),
        ("report", "stiefel", "--t", "2"),
        ("report", "heisenberg", "--n", "2"),
        ("report", "kenmotsu_group", "--n", "1"),
        ("report", "sasaki", "--n", "3"),
        ("report", "kenmotsu", "--n", "2"),
    ],
)
def test_report_json_structure(capsys, argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert set(data) == TOP_KEYS
    assert data["checks"] and all(set(c) == {"name", "lhs", "rhs", "residual", "pass"} for c in data["checks"])
    assert all(c["pass"] for c in data["checks"])


def test_flag_half_is_pure_w1(capsys):
    _, out, _ = run(capsys, "report", "flag", "--t", "0.5", "--format", "json")
    data = json.loads(out)
    assert data["classes"]["labels"] == ["W1"]
    assert data["params"] == {"t": 0.5}
    names = {c["name"] for c in data["conventions"]["ledger"]}
    assert {"flag_s", "flag_s_star"} <= names


def test_report_is_byte_identical(capsys):
    outs = {run(capsys, "report", "stiefel", "--t", "0.25", "--format", "json")[1] for _ in range(3)}
    assert len(outs) == 1


def test_pretty_report(capsys):
    code, out, _ = run(capsys, "report", "stiefel")
    assert code == 0
    assert "pattern sasaki" in out and "[PASS] divergence_gperp" in out


def test_report_to_file(capsys, tmp_path):
    path = tmp_path / "r.json"
    assert run(capsys, "report", "heisenberg", "--format", "json", "-o", str(path))[0] == 0
    assert set(json.loads(path.read_text())) == TOP_KEYS


def test_dump_and_load_roundtrip(capsys, tmp_path):
    path = tmp_path / "flag.json"
    assert run(capsys, "dump-model", "flag", "--t", "0.7", "-o", str(path))[0] == 0
    _, direct, _ = run(capsys, "report", "flag", "--t", "0.7", "--format", "json")
    code, loaded, _ = run(capsys, "load-model", str(path), "--format", "json")
    assert code == 0 and loaded == direct


def test_load_malformed_json(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"name": "x",\n  "dim": }')
    code, _, err = run(capsys, "load-model", str(path))
    assert code == 2 and "line 2" in err


def test_load_names_the_bad_field(capsys, tmp_path):
    data = build_flag(1.0).to_dict()
    data["lambda"][3][0][1] = 9.0
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    code, _, err = run(capsys, "load-model", str(path))
    assert code == 2 and "field 'lambda': slice 3" in err


def test_load_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "load-model", str(tmp_path / "nope.json"))
    assert code == 2 and "cannot read" in err


@pytest.mark.parametrize(
    "argv",
    [
        ("report", "flag", "--t", "-1"),
        ("report", "flag", "--t", "0"),
        ("report", "sasaki", "--n", "1"),
        ("dump-model", "kenmotsu"),
        ("sweep", "flag", "--t-from", "2", "--t-to", "1"),
        ("fuzz", "--space", "hermitian", "--dim", "5", "--iters", "3"),
    ],
)
def test_input_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("gstruct: error:")


@pytest.mark.parametrize("argv", [(), ("report",), ("report", "torus"), ("fuzz", "--space", "g2", "--dim", "7")])
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(list(argv))
    assert exc.value.code == 2


def test_tolerance_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("GSTRUCT_TOL", "1e-40")
    code, out, _ = run(capsys, "report", "flag", "--t", "3", "--format", "json")
    assert code == 1
    assert json.loads(out)["conventions"]["tolerance"] == 1e-40
    monkeypatch.setenv("GSTRUCT_TOL", "abc")
    assert run(capsys, "report", "flag")[0] == 2
    monkeypatch.setenv("GSTRUCT_TOL", "1e-40")
    assert run(capsys, "report", "flag", "--tol", "1e-9")[0] == 0


def test_sweep_csv(capsys, tmp_path):
    path = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, "sweep", "flag", "--t-from", "0.25", "--t-to", "4", "--steps", "5", "--csv", str(path))
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(path.read_text())))
    assert list(rows[0]) == ["t", "s", "s_star", "s_gperp", "s_alt_gperp", "chi2", "alt2", "sym2", "div_residual"]
    assert len(rows) == 5
    for row in rows:
        t = float(row["t"])
        assert float(row["s"]) == pytest.approx(24 - 4 * t + 4 / t)
        assert float(row["div_residual"]) < 1e-9


def test_fuzz_command(capsys):
    code, out, _ = run(capsys, "fuzz", "--space", "product", "--dim", "5", "--iters", "10", "--seed", "3", "--format", "json")
    assert code == 0
    assert json.loads(out)["failures"] == 0


def test_fuzz_failure_prints_seed(capsys):
    code, out, _ = run(capsys, "fuzz", "--space", "su", "--dim", "4", "--iters", "2", "--seed", "9", "--tol", "1e-40")
    assert code == 1 and "SeedSequence([9, 0])" in out


def test_dumps_is_plain_json():
    text = dumps(build_report(build_flag(1.0), 1e-9))
    assert "NaN" not in text and text.endswith("\n")
    assert json.loads(text)["model"] == "flag"
