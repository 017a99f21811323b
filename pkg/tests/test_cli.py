import json
from pathlib import Path

import pytest

from kmspec.cli import main, parse_z

CHAINS = Path(__file__).resolve().parents[1] / "chains"


def run(tmp_path, *args, name="out"):
    out = tmp_path / name
    code = main([*args, "--out", str(out)])
    return code, out


def test_parse_z():
    assert parse_z("1.5+2i") == 1.5 + 2j
    assert parse_z("-3i") == -3j
    assert parse_z("2") == 2


def test_jacobi_pentadiagonal(tmp_path):
    code, out = run(tmp_path, "jacobi", "--chain", str(CHAINS / "pentadiagonal.json"))
    assert code == 0
    lines = (out / "jacobi.csv").read_text().splitlines()
    assert lines[0].startswith("j,a_j,b_j")
    first = lines[1].split(",")
    assert first[:3] == ["0", "0.0", "0.5"]
    second = [float(x) for x in lines[2].split(",")[:3]]
    assert second[1] == pytest.approx(0.375, abs=1e-15) and second[2] == pytest.approx(11 ** 0.5 / 8, abs=1e-15)
    summary = json.loads((out / "summary.json").read_text())
    assert summary["pass"] and summary["command"] == "jacobi"


def test_pt_chebyshev(tmp_path):
    code, out = run(tmp_path, "pt", "--chain", str(CHAINS / "chebyshev.json"))
    assert code == 0
    rows = (out / "pt.csv").read_text().splitlines()[1:]
    assert max(float(r.split(",")[-1]) for r in rows) <= 1e-10


def test_pt_banded_reports_fbasis_failure(tmp_path):
    code, out = run(tmp_path, "pt", "--chain", str(CHAINS / "pentadiagonal.json"), "--tmax", "4")
    assert code == 1
    summary = json.loads((out / "summary.json").read_text())
    assert summary["checks"][0]["id"] == "fbasis_vs_oracle" and not summary["pass"]


@pytest.mark.parametrize("cmd,chain", [
    ("moments", "pentadiagonal.json"), ("poly", "birth_death.json"), ("measure", "chebyshev.json"),
    ("measure", "pentadiagonal.json"), ("gf", "chebyshev.json"), ("gf", "pentadiagonal.json"),
    ("contour-pt", "pentadiagonal.json"), ("jacobi", "random_conductance.json"),
])
def test_commands_pass(tmp_path, cmd, chain):
    code, out = run(tmp_path, cmd, "--chain", str(CHAINS / chain), "--tmax", "3", "--n", "6")
    assert code == 0, (out / "summary.json").read_text()


def test_moments_exact_columns(tmp_path):
    code, out = run(tmp_path, "moments", "--chain", str(CHAINS / "pentadiagonal.json"), "--n", "4")
    rows = (out / "moments.csv").read_text().splitlines()
    assert rows[3].split(",")[2:] == ["1", "4"]
    assert rows[4].split(",")[2:] == ["3", "32"]


def test_rh_check(tmp_path):
    code, out = run(tmp_path, "rh-check", "--chain", str(CHAINS / "chebyshev.json"), "--n", "2", "--z", "2.5i")
    assert code == 0


def test_gf_single_z(tmp_path):
    code, out = run(tmp_path, "gf", "--chain", str(CHAINS / "chebyshev.json"), "--z", "2")
    assert code == 0
    rows = (out / "gf.csv").read_text().splitlines()
    assert float(rows[1].split(",")[4]) == pytest.approx(2 / 3 ** 0.5, abs=1e-12)


def test_mc_deterministic(tmp_path):
    args = ("mc", "--chain", str(CHAINS / "pentadiagonal.json"), "--seed", "7", "--trials", "20000", "--tmax", "4")
    _, a = run(tmp_path, *args, name="a")
    _, b = run(tmp_path, *args, name="b")
    assert (a / "mc.csv").read_bytes() == (b / "mc.csv").read_bytes()
    meta = json.loads((a / "summary.json").read_text())["meta"]
    assert "Philox" in meta["rng"] and meta["seed"] == 7


def test_missing_chain(tmp_path):
    code, out = run(tmp_path, "moments")
    assert code == 2
    assert json.loads((out / "error.json").read_text())["type"] == "ConfigInvalid"


def test_invalid_chain_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"kind": "nope"}))
    assert run(tmp_path, "moments", "--chain", str(bad))[0] == 2


def test_gf_rejects_small_z(tmp_path):
    assert run(tmp_path, "gf", "--chain", str(CHAINS / "chebyshev.json"), "--z", "0.5")[0] == 2


def test_module_error_exit(tmp_path):
    spec = {"kind": "banded", "m": 2,
            "rows": [[0, 0, 0, "3/8", "5/8"], [0, "1/4", "1/4", "1/4", "1/4"]],
            "tail_row": ["1/4", "1/4", 0, "1/4", "1/4"]}
    path = tmp_path / "irreversible.json"
    path.write_text(json.dumps(spec))
    code, out = run(tmp_path, "jacobi", "--chain", str(path))
    assert code == 3
    assert json.loads((out / "error.json").read_text())["type"] == "NotReversible"
